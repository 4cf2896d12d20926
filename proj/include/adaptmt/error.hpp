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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace adaptmt {

enum class ErrorKind {
  kUsage,       // bad command line
  kArgument,    // invalid argument to an operation
  kValidation,  // data failed a contract check (leakage, manifest range, ...)
  kAlignment,   // parallel files disagree in line count
  kEncoding,    // invalid UTF-8
  kSize,        // not enough data for the requested operation
  kState,       // operation not permitted in current object state
  kConflict,    // duplicate id
  kIo,
  kTransport,   // HTTP failure after retries
  kProvider,    // embedding provider failure after retries
  kContract,    // remote peer violated the wire contract
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by remote calls that exhausted their retries. Carries the ids of
/// the work items that did not complete and the last HTTP status seen
/// (0 when no response was received at all).
class TransportError : public Error {
 public:
  TransportError(ErrorKind kind, const std::string& what,
                 std::vector<std::int64_t> failed_ids, int http_status)
      : Error(kind, what),
        failed_ids_(std::move(failed_ids)),
        http_status_(http_status) {}

  const std::vector<std::int64_t>& failed_ids() const noexcept {
    return failed_ids_;
  }
  int http_status() const noexcept { return http_status_; }

 private:
  std::vector<std::int64_t> failed_ids_;
  int http_status_;
};

}  // namespace adaptmt
