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

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "adaptmt/corpus.hpp"
#include "adaptmt/error.hpp"
#include "adaptmt/random.hpp"

namespace adaptmt::testing {

inline std::filesystem::path data_dir() { return ADAPTMT_TEST_DATA_DIR; }

/// Kind of the adaptmt::Error thrown by fn, or nullopt when none is thrown.
template <typename Fn>
std::optional<ErrorKind> error_kind(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("adaptmt_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

inline const std::vector<std::string>& small_vocab() {
  static const std::vector<std::string> v = {
      "el",   "la",    "casa",  "perro", "gato", "azul",   "rojo",  "grande", "come",
      "agua", "pan",   "libro", "mesa",  "sol",  "noche",  "día",   "ciudad", "río",
      "tren", "niño",  "mar",   "luz",   "año",  "camino", "verde", "viejo",  "nuevo"};
  return v;
}

inline std::string random_sentence(Rng& rng, std::size_t min_words, std::size_t max_words) {
  const auto& v = small_vocab();
  const std::size_t n = min_words + rng.uniform_index(max_words - min_words + 1);
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += v[rng.uniform_index(v.size())];
  }
  return s;
}

/// n distinct pairs; the target is a tagged copy of the source.
inline ParallelCorpus synthetic_corpus(std::size_t n, std::uint64_t seed,
                                       std::int64_t first_id = 0) {
  Rng rng(seed, 99);
  ParallelCorpus c;
  for (std::size_t i = 0; i < n; ++i) {
    SegmentPair p;
    p.id = first_id + static_cast<std::int64_t>(i);
    p.source = random_sentence(rng, 3, 10) + " n" + std::to_string(i);
    p.target = "EN " + p.source;
    c.pairs.push_back(std::move(p));
  }
  return c;
}

}  // namespace adaptmt::testing
