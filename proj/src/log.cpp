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

#include "adaptmt/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>

namespace adaptmt::log {

namespace {

Level initial_level() {
  const char* env = std::getenv("ADAPTMT_LOG_LEVEL");
  if (!env) return Level::kInfo;
  try {
    return parse_level(env);
  } catch (...) {
    return Level::kInfo;
  }
}

std::atomic<Level>& current() {
  static std::atomic<Level> lvl{initial_level()};
  return lvl;
}

std::mutex& sink_mutex() {
  static std::mutex mu;
  return mu;
}

Sink& sink_slot() {
  static Sink sink;
  return sink;
}

const char* tag(Level lvl) {
  switch (lvl) {
    case Level::kDebug: return "debug";
    case Level::kInfo: return "info";
    case Level::kWarn: return "warning";
    case Level::kError: return "error";
    case Level::kOff: return "";
  }
  return "";
}

}  // namespace

Level level() noexcept { return current().load(std::memory_order_relaxed); }
void set_level(Level lvl) noexcept { current().store(lvl); }

Level parse_level(const std::string& name) {
  if (name == "debug") return Level::kDebug;
  if (name == "info") return Level::kInfo;
  if (name == "warn" || name == "warning") return Level::kWarn;
  if (name == "error") return Level::kError;
  if (name == "off") return Level::kOff;
  throw std::invalid_argument("unknown log level: " + name);
}

Sink set_sink(Sink sink) {
  std::lock_guard lock(sink_mutex());
  Sink previous = std::move(sink_slot());
  sink_slot() = std::move(sink);
  return previous;
}

void write(Level lvl, const std::string& message) {
  std::lock_guard lock(sink_mutex());
  if (sink_slot()) {
    sink_slot()(lvl, message);
    return;
  }
  std::cerr << "[" << tag(lvl) << "] " << message << '\n';
}

}  // namespace adaptmt::log
