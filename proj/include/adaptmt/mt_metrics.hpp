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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace adaptmt {

enum class Direction { kHigherBetter, kLowerBetter };

struct MetricScore {
  std::string name;  // "BLEU", "chrF++" or "TER"
  double value = 0.0;
  Direction direction = Direction::kHigherBetter;

  friend bool operator==(const MetricScore&, const MetricScore&) = default;
};

/// Reference must contain at least one non-whitespace character; the
/// hypothesis may be empty.
struct EvalPair {
  std::string hypothesis;
  std::string reference;
};

/// mteval-v13a tokenization: punctuation and symbols split off, periods and
/// commas split unless next to a digit, single spaces between tokens.
std::string tokenize_13a(std::string_view line);

/// Corpus BLEU, max order 4, 13a tokens, exponential smoothing of zero
/// precisions. When no hypothesis is long enough for some order, the
/// geometric mean runs over the orders that have n-grams.
MetricScore bleu(std::span<const EvalPair> pairs);

/// Corpus chrF++: character 6-grams, word 2-grams, beta 2.
MetricScore chrf_pp(std::span<const EvalPair> pairs);

struct TerOptions {
  /// Diagonal band of the edit-distance matrix; 0 computes the full matrix.
  std::size_t beam_width = 25;
  std::size_t max_shift_iterations = 50;
};

struct TerStats {
  std::int64_t edits = 0;
  std::int64_t ref_words = 0;
};

/// Edits (shifts plus final edit distance) for one tokenized pair.
TerStats ter_sentence(std::span<const std::string> hyp_words,
                      std::span<const std::string> ref_words, const TerOptions& opts = {});

/// Word edit distance with uniform costs (band-limited as in TerOptions).
std::int64_t ter_edit_distance(std::span<const std::string> hyp_words,
                               std::span<const std::string> ref_words,
                               std::size_t beam_width = 25);

/// Corpus TER over 13a-tokenized, case-sensitive words:
/// total edits / total reference words × 100.
MetricScore ter(std::span<const EvalPair> pairs, const TerOptions& opts = {});

/// BLEU, chrF++, TER in that order.
std::vector<MetricScore> score_all(std::span<const EvalPair> pairs);

/// {"bleu": .., "chrf_pp": .., "ter": ..}
nlohmann::json scores_to_json(std::span<const MetricScore> scores);

/// Fixed two-decimal rendering used in reports.
std::string format_score(double value);

/// Line-aligned hypothesis and reference files.
std::vector<EvalPair> read_eval_pairs(const std::filesystem::path& hypotheses,
                                      const std::filesystem::path& references);
/// JSONL {"id", "hypothesis", "reference"}; "text" is accepted in place of
/// "hypothesis" so translate output can be scored directly.
std::vector<EvalPair> read_eval_jsonl(std::istream& in);
std::vector<EvalPair> read_eval_jsonl(const std::filesystem::path& path);

}  // namespace adaptmt
