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

#include "adaptmt/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_set>

#include "adaptmt/error.hpp"
#include "adaptmt/random.hpp"
#include "adaptmt/text.hpp"
#include "json.hpp"

namespace adaptmt {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> read_lines(std::istream& in, const std::string& label) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!text::is_valid_utf8(line)) {
      throw Error(ErrorKind::kEncoding,
                  label + ": invalid UTF-8 on line " + std::to_string(lines.size() + 1));
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return in;
}

ParallelCorpus parse_tsv(const std::vector<std::string>& lines, const std::string& label) {
  ParallelCorpus corpus;
  corpus.pairs.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw Error(ErrorKind::kAlignment,
                  label + ": line " + std::to_string(i + 1) + " does not have exactly two columns");
    }
    corpus.pairs.push_back(SegmentPair{static_cast<std::int64_t>(i), line.substr(0, tab),
                                       line.substr(tab + 1)});
  }
  return corpus;
}

ParallelCorpus parse_jsonl(const std::vector<std::string>& lines, const std::string& label) {
  ParallelCorpus corpus;
  std::int64_t next_id = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    try {
      const auto obj = nlohmann::json::parse(lines[i]);
      SegmentPair p;
      p.id = obj.contains("id") ? obj.at("id").get<std::int64_t>() : next_id;
      p.source = obj.at("source").get<std::string>();
      p.target = obj.at("target").get<std::string>();
      next_id = p.id + 1;
      corpus.pairs.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kValidation,
                  label + ": line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  check_unique_ids(corpus);
  return corpus;
}

}  // namespace

const SegmentPair* ParallelCorpus::find(std::int64_t id) const {
  // Corpora loaded from files have id == position; try that first.
  if (id >= 0 && static_cast<std::size_t>(id) < pairs.size() && pairs[id].id == id) {
    return &pairs[id];
  }
  for (const auto& p : pairs) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

ParallelCorpus load_corpus(const fs::path& source_path, const fs::path& target_path) {
  auto src_in = open_input(source_path);
  auto tgt_in = open_input(target_path);
  auto src = read_lines(src_in, source_path.string());
  auto tgt = read_lines(tgt_in, target_path.string());
  if (src.size() != tgt.size()) {
    throw Error(ErrorKind::kAlignment,
                "line count mismatch: " + source_path.string() + " has " +
                    std::to_string(src.size()) + " lines, " + target_path.string() + " has " +
                    std::to_string(tgt.size()));
  }
  ParallelCorpus corpus;
  corpus.pairs.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    corpus.pairs.push_back(
        SegmentPair{static_cast<std::int64_t>(i), std::move(src[i]), std::move(tgt[i])});
  }
  return corpus;
}

ParallelCorpus load_corpus(const fs::path& path) {
  auto in = open_input(path);
  const auto format = path.extension() == ".jsonl" ? CorpusFormat::kJsonl : CorpusFormat::kTsv;
  const auto lines = read_lines(in, path.string());
  return format == CorpusFormat::kJsonl ? parse_jsonl(lines, path.string())
                                        : parse_tsv(lines, path.string());
}

ParallelCorpus load_corpus_spec(std::string_view spec) {
  if (spec == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    const std::string data = buf.str();
    std::istringstream in(data);
    const auto first = text::trim(data);
    const auto format =
        (!first.empty() && first.front() == '{') ? CorpusFormat::kJsonl : CorpusFormat::kTsv;
    return read_corpus(in, format);
  }
  const auto comma = spec.find(',');
  if (comma != std::string_view::npos) {
    return load_corpus(fs::path(std::string(spec.substr(0, comma))),
                       fs::path(std::string(spec.substr(comma + 1))));
  }
  return load_corpus(fs::path(std::string(spec)));
}

ParallelCorpus read_corpus(std::istream& in, CorpusFormat format) {
  const auto lines = read_lines(in, "<stream>");
  return format == CorpusFormat::kJsonl ? parse_jsonl(lines, "<stream>")
                                        : parse_tsv(lines, "<stream>");
}

void write_corpus(const ParallelCorpus& corpus, std::ostream& out, CorpusFormat format) {
  for (const auto& p : corpus.pairs) {
    if (format == CorpusFormat::kJsonl) {
      nlohmann::json obj = {{"id", p.id}, {"source", p.source}, {"target", p.target}};
      out << obj.dump() << '\n';
    } else {
      if (p.source.find_first_of("\t\n") != std::string::npos ||
          p.target.find_first_of("\t\n") != std::string::npos) {
        throw Error(ErrorKind::kValidation,
                    "pair " + std::to_string(p.id) + " contains a tab or newline; use JSONL");
      }
      out << p.source << '\t' << p.target << '\n';
    }
  }
}

void save_corpus(const ParallelCorpus& corpus, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  write_corpus(corpus, out,
               path.extension() == ".jsonl" ? CorpusFormat::kJsonl : CorpusFormat::kTsv);
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

ParallelCorpus filter_corpus(const ParallelCorpus& corpus, std::size_t max_words,
                             FilterStats* stats) {
  FilterStats local;
  local.input = corpus.size();
  ParallelCorpus out;
  out.source_lang = corpus.source_lang;
  out.target_lang = corpus.target_lang;

  std::unordered_set<std::string> seen;
  seen.reserve(corpus.size());
  for (const auto& p : corpus.pairs) {
    const std::size_t src_words = text::count_words(p.source);
    const std::size_t tgt_words = text::count_words(p.target);
    if (src_words == 0 || tgt_words == 0) {
      ++local.empty_side;
      continue;
    }
    if (src_words > max_words || tgt_words > max_words) {
      ++local.over_length;
      continue;
    }
    // Length prefix keeps ("ab", "c") and ("a", "bc") distinct.
    std::string key = std::to_string(text::trim_right(p.source).size());
    key.push_back(':');
    key.append(text::trim_right(p.source));
    key.append(text::trim_right(p.target));
    if (!seen.insert(std::move(key)).second) {
      ++local.duplicates;
      continue;
    }
    out.pairs.push_back(p);
  }
  local.kept = out.size();
  if (stats) *stats = local;
  return out;
}

DatasetSplit split_corpus(const ParallelCorpus& corpus, std::size_t validation_size,
                          std::uint64_t seed) {
  if (validation_size >= corpus.size() && !(validation_size == 0 && corpus.empty())) {
    throw Error(ErrorKind::kSize, "validation size " + std::to_string(validation_size) +
                                      " must be smaller than corpus size " +
                                      std::to_string(corpus.size()));
  }
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed, /*stream=*/1);
  rng.shuffle(std::span<std::size_t>(order));

  std::vector<char> in_validation(corpus.size(), 0);
  for (std::size_t i = 0; i < validation_size; ++i) in_validation[order[i]] = 1;

  DatasetSplit split;
  split.train.source_lang = split.validation.source_lang = corpus.source_lang;
  split.train.target_lang = split.validation.target_lang = corpus.target_lang;
  split.train.pairs.reserve(corpus.size() - validation_size);
  split.validation.pairs.reserve(validation_size);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (in_validation[i] ? split.validation : split.train).pairs.push_back(corpus.pairs[i]);
  }
  return split;
}

void check_unique_ids(const ParallelCorpus& corpus) {
  std::unordered_set<std::int64_t> ids;
  ids.reserve(corpus.size());
  for (const auto& p : corpus.pairs) {
    if (!ids.insert(p.id).second) {
      throw Error(ErrorKind::kValidation, "duplicate pair id " + std::to_string(p.id));
    }
  }
}

}  // namespace adaptmt
