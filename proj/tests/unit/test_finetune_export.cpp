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

#include "adaptmt/finetune_export.hpp"

#include <set>

#include "doctest.h"
#include "support.hpp"

using namespace adaptmt;
using adaptmt::testing::error_kind;
using adaptmt::testing::TempDir;

namespace {

ContextStore small_store(std::size_t n, std::uint64_t seed) {
  EmbeddingProviderConfig p;
  p.dim = 32;
  IvfConfig c;
  c.dim = 32;
  c.nlist = 4;
  c.nprobe = 4;
  return ContextStore::build(adaptmt::testing::synthetic_corpus(n, seed, 100000), p, c);
}

std::size_t count_one_shot(const FinetuneDataset& ds) {
  std::size_t n = 0;
  for (const auto* part : {&ds.train, &ds.validation}) {
    for (const auto& e : *part) n += e.shot_type == ShotType::kOne;
  }
  return n;
}

}  // namespace

TEST_CASE("mix counts and split sizes") {
  const auto corpus = adaptmt::testing::synthetic_corpus(500, 1);
  const auto store = small_store(100, 2);
  MixSpec mix;
  mix.total = 300;
  mix.one_shot_ratio = 0.5;
  mix.validation_size = 30;
  mix.seed = 9;
  const LanguageNames langs;
  const auto ds = build_finetune_dataset(corpus, &store, mix, langs);
  CHECK(ds.train.size() == 270);
  CHECK(ds.validation.size() == 30);
  CHECK(count_one_shot(ds) == 150);

  const auto again = build_finetune_dataset(corpus, &store, mix, langs);
  CHECK(again.train == ds.train);
  CHECK(again.validation == ds.validation);

  mix.one_shot_ratio = 1.0 / 3.0;
  CHECK(count_one_shot(build_finetune_dataset(corpus, &store, mix, langs)) == 100);
}

TEST_CASE("examples parse with one more completed target line") {
  const auto corpus = adaptmt::testing::synthetic_corpus(60, 3);
  const auto store = small_store(40, 4);
  MixSpec mix;
  mix.total = 50;
  mix.validation_size = 5;
  const LanguageNames langs;
  const auto ds = build_finetune_dataset(corpus, &store, mix, langs);
  std::set<std::string> completions;
  for (const auto& e : ds.train) {
    CHECK(e.completion.front() == ' ');
    CHECK(e.completion.back() == '\n');
    CHECK(e.completion.find('\n') == e.completion.size() - 1);
    const auto prompt_only = parse_prompt(e.prompt, langs);
    const auto full = parse_prompt(e.prompt + e.completion, langs);
    CHECK_FALSE(prompt_only.completion.has_value());
    REQUIRE(full.completion.has_value());
    CHECK(full.examples.size() == prompt_only.examples.size());
    CHECK(prompt_only.examples.size() == (e.shot_type == ShotType::kOne ? 1u : 0u));
    CHECK(completions.insert(e.completion).second);  // distinct pairs
  }
}

TEST_CASE("ratio edge cases and errors") {
  const auto corpus = adaptmt::testing::synthetic_corpus(20, 5);
  const LanguageNames langs;
  MixSpec mix;
  mix.total = 10;
  mix.validation_size = 2;
  mix.one_shot_ratio = 0.0;
  const auto zero = build_finetune_dataset(corpus, nullptr, mix, langs);
  CHECK(count_one_shot(zero) == 0);

  const auto store = small_store(30, 6);
  mix.total = 2;
  mix.validation_size = 1;
  mix.one_shot_ratio = 1.0;
  const auto ones = build_finetune_dataset(corpus, &store, mix, langs);
  for (const auto* part : {&ones.train, &ones.validation}) {
    for (const auto& e : *part) CHECK(parse_prompt(e.prompt, langs).examples.size() == 1);
  }

  mix.total = 21;
  mix.one_shot_ratio = 0.0;
  CHECK(error_kind([&] { build_finetune_dataset(corpus, nullptr, mix, langs); }) == ErrorKind::kSize);
  mix.total = 10;
  mix.one_shot_ratio = 0.5;
  CHECK(error_kind([&] { build_finetune_dataset(corpus, nullptr, mix, langs); }) == ErrorKind::kState);
  mix.validation_size = 10;
  CHECK(error_kind([&] { mix.validate(); }).has_value());
}

TEST_CASE("jsonl round trip") {
  TempDir dir("ft");
  std::vector<FinetuneExample> ex{
      {"Spanish: \"q\"\nEnglish:", " \"Q\"\n", ShotType::kZero},
      {"Spanish: a\nEnglish: b\nSpanish: c\nEnglish:", " d\n", ShotType::kOne},
      {"Spanish: ñ\\\nEnglish:", " ü\n", ShotType::kZero}};
  CHECK(write_jsonl(ex, dir / "a.jsonl") == 3);
  CHECK(read_jsonl(dir / "a.jsonl") == ex);
  CHECK(adaptmt::testing::read_lines(dir / "a.jsonl").size() == 3);
  const auto first = nlohmann::json::parse(adaptmt::testing::read_lines(dir / "a.jsonl")[0]);
  CHECK(first["schema_version"] == kFinetuneSchemaVersion);
  CHECK(first["shot_type"] == "zero");

  CHECK(write_jsonl({}, dir / "empty.jsonl") == 0);
  CHECK(adaptmt::testing::read_file(dir / "empty.jsonl").empty());
  CHECK(read_jsonl(dir / "empty.jsonl").empty());
}

TEST_CASE("training manifest carries the fine-tuning hyperparameters") {
  TempDir dir("ft");
  TrainingManifest m;
  emit_training_manifest(m, dir / "m.json");
  const auto j = nlohmann::json::parse(adaptmt::testing::read_file(dir / "m.json"));
  CHECK(j["training"]["learning_rate"] == 0.002);
  CHECK(j["training"]["epochs"] == 1);
  CHECK(j["training"]["batch_size"] == 32);
  CHECK(j["training"]["warmup_ratio"] == 0.03);
  CHECK(j["training"]["lr_scheduler"] == "constant");
  CHECK(j["training"]["bf16"] == true);
  CHECK(j["lora"]["r"] == 64);
  CHECK(j["lora"]["alpha"] == 16);
  CHECK(j["lora"]["dropout"] == 0.1);
  CHECK(j["lora"]["bias"] == "none");
  CHECK(j["quantization"]["load_in_4bit"] == true);
  CHECK(j["quantization"]["quant_type"] == "nf4");
  CHECK(j["quantization"]["double_quant"] == true);
  CHECK(j["quantization"]["compute_dtype"] == "bfloat16");
  CHECK(j.contains("schema_version"));
  CHECK(TrainingManifest::from_json(j).to_json() == j);

  m.lora.dropout = 1.5;
  CHECK(error_kind([&] { emit_training_manifest(m, dir / "bad.json"); }) == ErrorKind::kValidation);
  m.lora.dropout = 0.1;
  m.training.learning_rate = 0.0;
  CHECK(error_kind([&] { m.validate(); }) == ErrorKind::kValidation);
}
