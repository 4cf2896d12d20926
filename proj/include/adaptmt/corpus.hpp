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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adaptmt {

/// One aligned source/target sentence pair.
struct SegmentPair {
  std::int64_t id = 0;
  std::string source;
  std::string target;

  friend bool operator==(const SegmentPair&, const SegmentPair&) = default;
};

struct ParallelCorpus {
  std::vector<SegmentPair> pairs;
  std::string source_lang = "es";
  std::string target_lang = "en";

  std::size_t size() const noexcept { return pairs.size(); }
  bool empty() const noexcept { return pairs.empty(); }

  /// Returns the pair with the given id, or nullptr.
  const SegmentPair* find(std::int64_t id) const;
};

struct DatasetSplit {
  ParallelCorpus train;
  ParallelCorpus validation;
  std::optional<ParallelCorpus> test;
  std::optional<ParallelCorpus> context;
};

struct FilterStats {
  std::size_t input = 0;
  std::size_t kept = 0;
  std::size_t duplicates = 0;
  std::size_t empty_side = 0;
  std::size_t over_length = 0;
};

enum class CorpusFormat { kTsv, kJsonl };

inline constexpr std::size_t kDefaultMaxWords = 70;

/// Reads two parallel plain-text files. Ids are assigned in line order from 0.
ParallelCorpus load_corpus(const std::filesystem::path& source_path,
                           const std::filesystem::path& target_path);

/// Reads a single two-column TSV file, or JSON lines when the extension is
/// ".jsonl".
ParallelCorpus load_corpus(const std::filesystem::path& path);

/// Accepts "src.txt,tgt.txt", a single TSV/JSONL path, or "-" for stdin
/// (format sniffed from the first byte).
ParallelCorpus load_corpus_spec(std::string_view spec);

ParallelCorpus read_corpus(std::istream& in, CorpusFormat format);
void write_corpus(const ParallelCorpus& corpus, std::ostream& out, CorpusFormat format);

/// Writes TSV or JSONL depending on the extension.
void save_corpus(const ParallelCorpus& corpus, const std::filesystem::path& path);

/// Removes exact duplicates (first occurrence kept, compared after trimming
/// trailing whitespace), pairs with an empty side, and pairs with either side
/// longer than max_words whitespace tokens. Order is preserved.
ParallelCorpus filter_corpus(const ParallelCorpus& corpus,
                             std::size_t max_words = kDefaultMaxWords,
                             FilterStats* stats = nullptr);

/// Seeded uniform draw of validation_size pairs without replacement; the
/// remainder is train. Both keep the input's relative order.
DatasetSplit split_corpus(const ParallelCorpus& corpus, std::size_t validation_size,
                          std::uint64_t seed);

/// Throws kValidation when two pairs share an id.
void check_unique_ids(const ParallelCorpus& corpus);

}  // namespace adaptmt
