// Copyright 2026 the adaptmt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace adaptmt::http {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;    // starts with '/'
};

/// Splits an absolute http(s) URL. Throws kArgument on anything else.
Url parse_url(const std::string& url);

/// Joins an origin-or-base URL with a path, avoiding doubled slashes.
std::string join_path(const std::string& base, const std::string& path);

struct Response {
  int status = 0;  // 0 when no response was received
  std::string body;
  std::string error;  // transport-level error description
};

struct RequestOptions {
  std::chrono::milliseconds timeout{120'000};
  std::vector<std::pair<std::string, std::string>> headers;
};

/// Single POST of a JSON body; never throws on network failure.
Response post_json(const std::string& url, const std::string& body, const RequestOptions& opts);

/// Bearer authorization header from the named environment variable, if set.
std::vector<std::pair<std::string, std::string>> auth_headers(const std::string& env_var);

}  // namespace adaptmt::http
