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

#include <set>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

using namespace adaptmt;
using adaptmt::testing::error_kind;
using adaptmt::testing::TempDir;
using adaptmt::testing::write_file;

namespace {

ParallelCorpus make(std::initializer_list<std::pair<const char*, const char*>> rows) {
  ParallelCorpus c;
  std::int64_t id = 0;
  for (const auto& [s, t] : rows) c.pairs.push_back({id++, s, t});
  return c;
}

std::string words(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += (i ? " w" : "w") + std::to_string(i);
  return s;
}

}  // namespace

TEST_CASE("load parallel text files") {
  TempDir dir("corpus");
  write_file(dir / "a.es", "uno\ndos\ntres\n");
  write_file(dir / "a.en", "one\ntwo\nthree\n");
  const auto c = load_corpus(dir / "a.es", dir / "a.en");
  REQUIRE(c.size() == 3);
  CHECK(c.pairs[0] == SegmentPair{0, "uno", "one"});
  CHECK(c.pairs[2] == SegmentPair{2, "tres", "three"});

  write_file(dir / "b.es", "1\n2\n3\n4\n");
  write_file(dir / "b.en", "1\n2\n3\n");
  CHECK(error_kind([&] { load_corpus(dir / "b.es", dir / "b.en"); }) == ErrorKind::kAlignment);

  write_file(dir / "e.es", "");
  write_file(dir / "e.en", "");
  CHECK(load_corpus(dir / "e.es", dir / "e.en").empty());

  write_file(dir / "bad.es", "ok\n\xC3\x28\n");
  write_file(dir / "bad.en", "ok\nok\n");
  CHECK(error_kind([&] { load_corpus(dir / "bad.es", dir / "bad.en"); }) == ErrorKind::kEncoding);
  CHECK(error_kind([&] { load_corpus(dir / "missing.tsv"); }) == ErrorKind::kIo);
}

TEST_CASE("tsv and jsonl round trip through files and spec strings") {
  TempDir dir("corpus");
  const auto c = make({{"Hola.", "Hello."}, {"tab\\less \"q\"", "quote \"x\""}, {"ñ", "ñ"}});
  save_corpus(c, dir / "c.tsv");
  save_corpus(c, dir / "c.jsonl");
  CHECK(load_corpus(dir / "c.tsv").pairs == c.pairs);
  CHECK(load_corpus(dir / "c.jsonl").pairs == c.pairs);
  CHECK(load_corpus_spec((dir / "c.tsv").string()).pairs == c.pairs);

  write_file(dir / "s.txt", "a\nb\n");
  write_file(dir / "t.txt", "A\nB\n");
  const auto spec = (dir / "s.txt").string() + "," + (dir / "t.txt").string();
  CHECK(load_corpus_spec(spec).size() == 2);

  std::stringstream ss;
  write_corpus(c, ss, CorpusFormat::kJsonl);
  CHECK(read_corpus(ss, CorpusFormat::kJsonl).pairs == c.pairs);
}

TEST_CASE("tsv rows need exactly two columns") {
  std::stringstream ss("a\tb\nonly-one\n");
  CHECK(error_kind([&] { read_corpus(ss, CorpusFormat::kTsv); }).has_value());
}

TEST_CASE("filter removes duplicates, empty sides and long pairs") {
  FilterStats stats;
  auto c = make({{"a", "b"}, {"a", "b"}, {"x", "y"}, {"a", "c"}});
  auto f = filter_corpus(c, 70, &stats);
  CHECK(f.size() == 3);
  CHECK(stats.duplicates == 1);
  CHECK(f.pairs[0].id == 0);
  CHECK(f.pairs[2].id == 3);  // same source, other target is kept

  c = make({{"a ", "b"}, {"a", "b\t"}, {"", "z"}, {"q", "   "}});
  f = filter_corpus(c, 70, &stats);
  CHECK(f.size() == 1);
  CHECK(stats.duplicates == 1);
  CHECK(stats.empty_side == 2);

  ParallelCorpus lengths;
  lengths.pairs.push_back({0, words(70), "ok"});
  lengths.pairs.push_back({1, words(71), "ok"});
  lengths.pairs.push_back({2, "ok", words(71)});
  f = filter_corpus(lengths, 70, &stats);
  REQUIRE(f.size() == 1);
  CHECK(f.pairs[0].id == 0);
  CHECK(stats.over_length == 2);
  CHECK(stats.input == 3);
  CHECK(stats.kept == 1);
}

TEST_CASE("filter is idempotent and complete on random corpora") {
  Rng rng(5);
  for (int round = 0; round < 200; ++round) {
    ParallelCorpus c;
    const std::size_t n = rng.uniform_index(30);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string s = rng.uniform_index(4) == 0 ? "" : words(rng.uniform_index(6));
      const std::string t = words(rng.uniform_index(6));
      c.pairs.push_back({static_cast<std::int64_t>(i), s, t});
    }
    FilterStats st;
    const auto f = filter_corpus(c, 4, &st);
    CHECK(filter_corpus(f, 4).pairs == f.pairs);
    CHECK(st.kept + st.duplicates + st.empty_side + st.over_length == st.input);
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& p : f.pairs) {
      CHECK(seen.emplace(p.source, p.target).second);
      CHECK(c.find(p.id) != nullptr);
      CHECK(*c.find(p.id) == p);
    }
  }
}

TEST_CASE("split sizes, determinism and partition") {
  const auto c = adaptmt::testing::synthetic_corpus(200, 1);
  const auto a = split_corpus(c, 20, 7);
  const auto b = split_corpus(c, 20, 7);
  CHECK(a.train.size() == 180);
  CHECK(a.validation.size() == 20);
  CHECK(a.train.pairs == b.train.pairs);
  CHECK(a.validation.pairs == b.validation.pairs);
  CHECK(split_corpus(c, 20, 8).validation.pairs != a.validation.pairs);

  std::set<std::int64_t> ids;
  for (const auto& p : a.train.pairs) ids.insert(p.id);
  for (const auto& p : a.validation.pairs) CHECK(ids.insert(p.id).second);
  CHECK(ids.size() == c.size());

  const auto none = split_corpus(c, 0, 1);
  CHECK(none.train.pairs == c.pairs);
  CHECK(none.validation.empty());
  CHECK(error_kind([&] { split_corpus(c, 200, 1); }) == ErrorKind::kSize);
}

TEST_CASE("full-size split counts") {
  const auto c = adaptmt::testing::synthetic_corpus(20000, 2);
  const auto s = split_corpus(c, 1000, 0);
  CHECK(s.train.size() == 19000);
  CHECK(s.validation.size() == 1000);
}

TEST_CASE("duplicate ids are rejected") {
  auto c = make({{"a", "b"}, {"c", "d"}});
  c.pairs[1].id = 0;
  CHECK(error_kind([&] { check_unique_ids(c); }) == ErrorKind::kValidation);
}
