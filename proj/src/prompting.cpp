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

#include "adaptmt/prompting.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "adaptmt/error.hpp"
#include "adaptmt/text.hpp"
#include "json.hpp"

namespace adaptmt {

using nlohmann::json;

void LanguageNames::validate() const {
  if (source_name.empty() || target_name.empty() || source_code.empty() || target_code.empty()) {
    throw Error(ErrorKind::kArgument, "language names and codes must be non-empty");
  }
  if (source_name.find('\n') != std::string::npos || target_name.find('\n') != std::string::npos) {
    throw Error(ErrorKind::kArgument, "language names must not contain newlines");
  }
}

std::string prompt_segment(std::string_view text) { return text::flatten_newlines(text); }

namespace {

void append_line(std::string& out, const std::string& name, std::string_view segment) {
  out.append(name);
  out.append(": ");
  out.append(prompt_segment(segment));
  out.push_back('\n');
}

void append_stub(std::string& out, std::string_view source, const LanguageNames& langs) {
  append_line(out, langs.source_name, source);
  out.append(langs.target_name);
  out.push_back(':');
}

void require_source(std::string_view source) {
  if (text::trim(source).empty()) throw Error(ErrorKind::kArgument, "source segment is empty");
}

}  // namespace

RenderedPrompt render_zero_shot(std::string_view source, const LanguageNames& langs) {
  langs.validate();
  require_source(source);
  RenderedPrompt p;
  append_stub(p.text, source, langs);
  p.shots = 0;
  return p;
}

RenderedPrompt render_few_shot(std::string_view source, std::span<const FuzzyMatch> matches,
                               const LanguageNames& langs) {
  langs.validate();
  require_source(source);
  if (matches.empty()) {
    throw Error(ErrorKind::kArgument, "few-shot prompt needs at least one match");
  }
  std::vector<const FuzzyMatch*> ordered;
  ordered.reserve(matches.size());
  for (const auto& m : matches) ordered.push_back(&m);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const FuzzyMatch* a, const FuzzyMatch* b) { return a->score < b->score; });

  RenderedPrompt p;
  for (const FuzzyMatch* m : ordered) {
    append_line(p.text, langs.source_name, m->pair.source);
    append_line(p.text, langs.target_name, m->pair.target);
  }
  append_stub(p.text, source, langs);
  p.shots = matches.size();
  return p;
}

Seq2SeqInput render_seq2seq_fuzzy(std::string_view source, const FuzzyMatch& match,
                                  const LanguageNames& langs, std::string_view separator_token) {
  langs.validate();
  require_source(source);
  if (separator_token.empty()) throw Error(ErrorKind::kArgument, "separator token is empty");
  Seq2SeqInput out;
  out.encoder_text = prompt_segment(match.pair.source) + " " + langs.source_code + " " +
                     std::string(separator_token) + " " + prompt_segment(source);
  out.decoder_prefix = prompt_segment(match.pair.target) + " " + langs.target_code + " " +
                       std::string(separator_token);
  return out;
}

Seq2SeqInput render_seq2seq_fuzzy(std::string_view source, std::span<const FuzzyMatch> matches,
                                  const LanguageNames& langs, std::string_view separator_token) {
  if (matches.empty()) throw Error(ErrorKind::kArgument, "fuzzy-augmented input needs a match");
  return render_seq2seq_fuzzy(source, matches.front(), langs, separator_token);
}

ParsedPrompt parse_prompt(std::string_view text_in, const LanguageNames& langs) {
  std::string_view body = text_in;
  if (!body.empty() && body.back() == '\n') body.remove_suffix(1);

  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (;;) {
    const auto nl = body.find('\n', start);
    lines.push_back(body.substr(start, nl == std::string_view::npos ? nl : nl - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  if (lines.size() % 2 != 0) {
    throw Error(ErrorKind::kValidation, "prompt has an odd number of lines");
  }

  const std::string src_prefix = langs.source_name + ": ";
  const std::string tgt_prefix = langs.target_name + ": ";
  const std::string tgt_stub = langs.target_name + ":";

  ParsedPrompt parsed;
  const std::size_t pairs = lines.size() / 2;
  for (std::size_t i = 0; i < pairs; ++i) {
    const auto src = lines[2 * i];
    const auto tgt = lines[2 * i + 1];
    if (!src.starts_with(src_prefix)) {
      throw Error(ErrorKind::kValidation, "line " + std::to_string(2 * i + 1) +
                                              " does not start with \"" + src_prefix + "\"");
    }
    const std::string source(src.substr(src_prefix.size()));
    const bool last = i + 1 == pairs;
    if (tgt.starts_with(tgt_prefix)) {
      std::string target(tgt.substr(tgt_prefix.size()));
      if (last) {
        parsed.query = source;
        parsed.completion = std::move(target);
      } else {
        parsed.examples.emplace_back(source, std::move(target));
      }
    } else if (last && tgt == tgt_stub) {
      parsed.query = source;
    } else {
      throw Error(ErrorKind::kValidation, "line " + std::to_string(2 * i + 2) +
                                              " is not a target line");
    }
  }
  return parsed;
}

void write_prompt_dump(std::ostream& out, const std::vector<PromptRecord>& records) {
  for (const auto& r : records) {
    json obj = {{"id", r.id},
                {"prompt", r.prompt.text},
                {"shots", r.prompt.shots},
                {"reference", r.reference},
                {"source", r.source},
                {"stop", r.prompt.stop_sequence}};
    out << obj.dump() << '\n';
  }
}

std::vector<PromptRecord> read_prompt_dump(std::istream& in) {
  std::vector<PromptRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const auto obj = json::parse(line);
      PromptRecord r;
      r.id = obj.at("id").get<std::int64_t>();
      r.prompt.text = obj.at("prompt").get<std::string>();
      r.prompt.shots = obj.at("shots").get<std::size_t>();
      r.prompt.stop_sequence = obj.value("stop", std::string(kDefaultStopSequence));
      r.reference = obj.value("reference", std::string());
      r.source = obj.value("source", std::string());
      records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kValidation,
                  "prompt dump line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace adaptmt
