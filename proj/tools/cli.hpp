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

#include <ostream>
#include <string>
#include <vector>

namespace adaptmt::cli {

enum ExitCode : int { kOk = 0, kUsageError = 1, kDataError = 2, kTransportError = 3 };

/// Runs one invocation. `args` excludes the program name. Machine-readable
/// output goes to `out`, usage and error text to `err`; logs go through the
/// adaptmt::log sink.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adaptmt::cli
