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

#include "adaptmt/embedding.hpp"

#include <cmath>

#include "doctest.h"
#include "support.hpp"

using namespace adaptmt;
using adaptmt::testing::error_kind;
using adaptmt::testing::TempDir;

TEST_CASE("deterministic embedding is stable, normalized and sized") {
  const auto a = deterministic_embed("La casa azul.", 384, 0);
  const auto b = deterministic_embed("La casa azul.", 384, 0);
  CHECK(a.values == b.values);
  CHECK(a.dim() == 384);
  CHECK(a.normalized);
  CHECK(std::abs(l2_norm(a.values) - 1.0) <= 1e-6);
  CHECK(deterministic_embed("La casa azul.", 384, 1).values != a.values);
  CHECK(cosine_similarity(a.values, b.values) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("near strings are closer than unrelated ones") {
  const auto x = deterministic_embed("abcdefgh", 384, 0);
  const auto near = deterministic_embed("abcdefgx", 384, 0);
  const auto far = deterministic_embed("zzzzzzzz", 384, 0);
  CHECK(cosine_similarity(x.values, near.values) > cosine_similarity(x.values, far.values));
  // Case is folded before hashing.
  CHECK(deterministic_embed("ABCDEFGH", 384, 0).values == x.values);
}

TEST_CASE("empty text maps to e0") {
  const auto e = deterministic_embed("", 8, 3);
  CHECK(e.values == std::vector<float>{1, 0, 0, 0, 0, 0, 0, 0});
  std::vector<float> zero(4, 0.0f);
  l2_normalize(zero);
  CHECK(zero == std::vector<float>{1, 0, 0, 0});
}

TEST_CASE("batch embedding preserves order and matches single calls") {
  EmbeddingProviderConfig cfg;
  cfg.dim = 64;
  cfg.batch_size = 3;
  cfg.seed = 4;
  std::vector<std::string> texts;
  adaptmt::Rng rng(1);
  for (int i = 0; i < 10; ++i) texts.push_back(adaptmt::testing::random_sentence(rng, 1, 8));
  const auto all = embed_batch(texts, cfg);
  REQUIRE(all.size() == texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const std::vector<std::string> one{texts[i]};
    CHECK(embed_batch(one, cfg)[0].values == all[i].values);
    CHECK(all[i].values == deterministic_embed(texts[i], 64, 4).values);
    for (float v : all[i].values) CHECK(std::isfinite(v));
  }
  CHECK(error_kind([&] { embed_batch(std::vector<std::string>{}, cfg); }) == ErrorKind::kArgument);
}

TEST_CASE("config validation") {
  EmbeddingProviderConfig cfg;
  cfg.dim = 0;
  CHECK(error_kind([&] { cfg.validate(); }) == ErrorKind::kArgument);
  cfg.dim = 8;
  cfg.kind = ProviderKind::kRemoteHttp;
  CHECK(error_kind([&] { cfg.validate(); }) == ErrorKind::kArgument);
}

TEST_CASE("remote provider failure is a provider error") {
  EmbeddingProviderConfig cfg;
  cfg.kind = ProviderKind::kRemoteHttp;
  cfg.endpoint = "http://127.0.0.1:1/embed";
  cfg.dim = 8;
  cfg.attempts = 2;
  cfg.initial_backoff = std::chrono::milliseconds(1);
  cfg.timeout = std::chrono::milliseconds(500);
  const std::vector<std::string> texts{"a"};
  CHECK(error_kind([&] { embed_batch(texts, cfg); }) == ErrorKind::kProvider);
}

TEST_CASE("embedding cache round trip") {
  TempDir dir("emb");
  EmbeddingCache c;
  c.dim = 3;
  c.data = {1, 2, 3, 4, 5, 6};
  c.text_hashes = {text_hash("a"), text_hash("b")};
  c.ids = {10, 11};
  c.model_name = "m";
  write_embedding_cache(dir / "c.bin", c);
  const auto r = read_embedding_cache(dir / "c.bin");
  CHECK(r.dim == 3);
  CHECK(r.data == c.data);
  CHECK(r.text_hashes == c.text_hashes);
  CHECK(r.ids == c.ids);
  CHECK(r.model_name == "m");
  CHECK(r.count() == 2);
  CHECK(r.row(1)[0] == 4.0f);
  CHECK(text_hash("") == 0xcbf29ce484222325ULL);
}
