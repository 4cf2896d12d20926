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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adaptmt/retrieval.hpp"

namespace adaptmt {

struct LanguageNames {
  std::string source_name = "Spanish";
  std::string target_name = "English";
  std::string source_code = "spa_Latn";
  std::string target_code = "eng_Latn";

  void validate() const;
};

inline constexpr const char* kDefaultStopSequence = "\n";

/// Completion-style prompt. The text always ends with "<target_name>:" and
/// the expected completion starts with a single space.
struct RenderedPrompt {
  std::string text;
  std::string stop_sequence = kDefaultStopSequence;
  std::size_t shots = 0;

  friend bool operator==(const RenderedPrompt&, const RenderedPrompt&) = default;
};

/// Encoder input and forced decoder prefix for an encoder-decoder model.
struct Seq2SeqInput {
  std::string encoder_text;
  std::string decoder_prefix;
};

/// "<source_name>: <source>\n<target_name>:"
RenderedPrompt render_zero_shot(std::string_view source, const LanguageNames& langs);

/// One "<source_name>: s'\n<target_name>: t'\n" block per match, lowest
/// score first so the best match sits next to the query, then the zero-shot
/// stub for `source`.
RenderedPrompt render_few_shot(std::string_view source, std::span<const FuzzyMatch> matches,
                               const LanguageNames& langs);

/// encoder: "<fuzzy_source> <source_code> <sep> <source>",
/// prefix:  "<fuzzy_target> <target_code> <sep>".
Seq2SeqInput render_seq2seq_fuzzy(std::string_view source, const FuzzyMatch& match,
                                  const LanguageNames& langs,
                                  std::string_view separator_token = "•");
/// Uses the first (best) of the retrieved matches; an empty list is an
/// argument error.
Seq2SeqInput render_seq2seq_fuzzy(std::string_view source, std::span<const FuzzyMatch> matches,
                                  const LanguageNames& langs,
                                  std::string_view separator_token = "•");

/// Result of splitting a rendered prompt (optionally followed by a
/// completion) back into its parts.
struct ParsedPrompt {
  std::vector<std::pair<std::string, std::string>> examples;  // completed (source, target)
  std::string query;
  std::optional<std::string> completion;  // present when the last target line is filled
};

/// Scans "<name>: " line prefixes. Throws kValidation when the text does not
/// follow the alternating source/target layout.
ParsedPrompt parse_prompt(std::string_view text, const LanguageNames& langs);

/// Segment text as it appears inside a prompt: newlines become spaces.
std::string prompt_segment(std::string_view text);

/// One line of the prompt dump.
struct PromptRecord {
  std::int64_t id = 0;
  RenderedPrompt prompt;
  std::string source;
  std::string reference;

  friend bool operator==(const PromptRecord&, const PromptRecord&) = default;
};

/// JSON lines {"id", "prompt", "shots", "reference", "source", "stop"}.
void write_prompt_dump(std::ostream& out, const std::vector<PromptRecord>& records);
std::vector<PromptRecord> read_prompt_dump(std::istream& in);

}  // namespace adaptmt
