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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace adaptmt {

inline constexpr std::size_t kDefaultEmbeddingDim = 384;
inline constexpr const char* kDefaultEmbeddingModel = "microsoft/Multilingual-MiniLM-L12-H384";

struct EmbeddingVector {
  std::vector<float> values;
  bool normalized = false;

  std::size_t dim() const noexcept { return values.size(); }
  std::span<const float> view() const noexcept { return values; }
};

enum class ProviderKind { kRemoteHttp, kDeterministicTest };

struct EmbeddingProviderConfig {
  ProviderKind kind = ProviderKind::kDeterministicTest;
  std::string endpoint;  // full URL of the embed route (remote only)
  std::string model_name = kDefaultEmbeddingModel;
  std::size_t dim = kDefaultEmbeddingDim;
  std::size_t batch_size = 64;
  bool normalize = true;
  std::uint64_t seed = 0;  // deterministic provider only
  std::size_t max_in_flight = 4;
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
  std::chrono::milliseconds timeout{120'000};
  std::string api_key_env = "ADAPTMT_API_KEY";

  /// Throws kArgument when dim, batch_size or max_in_flight is zero or a
  /// remote provider has no endpoint.
  void validate() const;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  /// One vector per text, in order. Every output has config().dim entries.
  virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const = 0;
  virtual const EmbeddingProviderConfig& config() const noexcept = 0;
};

std::shared_ptr<const EmbeddingProvider> make_provider(const EmbeddingProviderConfig& cfg);

/// Convenience wrapper around make_provider(cfg)->embed(texts). Empty input
/// is an argument error.
std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts,
                                         const EmbeddingProviderConfig& cfg);

/// Signed hashed bag of lowercase character 3..5-grams, L2-normalized.
/// Texts shorter than three code points hash as a single gram; the empty
/// text maps to the unit basis vector e_0.
EmbeddingVector deterministic_embed(std::string_view text, std::size_t dim, std::uint64_t seed);

/// In-place L2 normalization computed in double precision. Zero vectors
/// become e_0.
void l2_normalize(std::span<float> v);
double l2_norm(std::span<const float> v);
double cosine_similarity(std::span<const float> a, std::span<const float> b);

/// 64-bit FNV-1a over the UTF-8 bytes.
std::uint64_t text_hash(std::string_view text) noexcept;

/// Binary matrix of embeddings plus a JSON sidecar (`<path>.json`) with the
/// model name and per-row text hashes.
struct EmbeddingCache {
  std::size_t dim = 0;
  std::vector<float> data;  // row-major, count × dim
  std::vector<std::uint64_t> text_hashes;
  std::vector<std::int64_t> ids;
  std::string model_name;

  std::size_t count() const noexcept { return dim ? data.size() / dim : 0; }
  std::span<const float> row(std::size_t i) const {
    return std::span<const float>(data).subspan(i * dim, dim);
  }
};

void write_embedding_cache(const std::filesystem::path& path, const EmbeddingCache& cache);
EmbeddingCache read_embedding_cache(const std::filesystem::path& path);

}  // namespace adaptmt
