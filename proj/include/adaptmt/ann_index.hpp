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
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "adaptmt/embedding.hpp"
#include "adaptmt/kernels.hpp"

namespace adaptmt {

inline constexpr std::size_t kDefaultNlist = 4096;
inline constexpr std::size_t kDefaultNprobe = 32;

struct IvfConfig {
  std::size_t dim = kDefaultEmbeddingDim;
  std::size_t nlist = kDefaultNlist;
  std::size_t nprobe = kDefaultNprobe;
  Metric metric = Metric::kCosine;
  std::size_t kmeans_iters = 25;
  std::uint64_t seed = 0;
  kernels::Backend backend = kernels::Backend::kOpenMP;

  /// Throws kArgument unless dim > 0 and 1 <= nprobe <= nlist.
  void validate() const;
};

struct SearchHit {
  std::int64_t id = 0;
  float score = 0.0f;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// Descending score, ties by ascending id.
inline bool hit_before(const SearchHit& a, const SearchHit& b) noexcept {
  return a.score > b.score || (a.score == b.score && a.id < b.id);
}

struct TrainStats {
  std::size_t iterations = 0;
  bool converged = false;
  std::optional<std::string> warning;
};

/// Recommended cluster-count range [4·sqrt(N), 16·sqrt(N)].
std::pair<double, double> recommended_nlist_range(std::size_t n_train);

/// Message when nlist falls outside the recommended range, otherwise empty.
std::optional<std::string> nlist_range_warning(std::size_t n_train, std::size_t nlist);

/// IVF-Flat index: a flat L2 coarse quantizer over k-means centroids, and
/// per-centroid inverted lists holding (id, vector) with exact scoring.
///
/// For Metric::kCosine, stored vectors and queries are unit-normalized
/// (vectors already within 1e-6 of unit norm are kept bit-for-bit) and scored
/// by inner product. The quantizer is L2 for both metrics.
///
/// Build (train/add) is single-writer; after seal() the index is read-only
/// and search() may be called concurrently.
class IvfIndex {
 public:
  IvfIndex() = default;

  /// Lloyd's k-means with k-means++ seeding. Needs at least nlist vectors.
  static IvfIndex train(std::span<const EmbeddingVector> vectors, const IvfConfig& cfg);
  /// Same, on a row-major n × dim matrix.
  static IvfIndex train_rows(std::span<const float> rows, const IvfConfig& cfg);

  void add(std::span<const std::int64_t> ids, std::span<const EmbeddingVector> vectors);
  void add_rows(std::span<const std::int64_t> ids, std::span<const float> rows);
  void seal() noexcept { sealed_ = true; }

  /// Top-k over the nprobe nearest lists (nprobe defaults to the configured
  /// value and is clamped to nlist). An empty index gives an empty result.
  std::vector<SearchHit> search(std::span<const float> query, std::size_t k,
                                std::optional<std::size_t> nprobe = std::nullopt) const;

  /// Searches many queries (row-major nq × dim), parallel over queries.
  std::vector<std::vector<SearchHit>> search_batch(
      std::span<const float> queries, std::size_t k,
      std::optional<std::size_t> nprobe = std::nullopt) const;

  /// Lists to probe for a query, nearest first (ties by lower list index).
  std::vector<std::uint32_t> probe_lists(std::span<const float> query, std::size_t nprobe) const;

  /// Index of the nearest centroid under L2.
  std::uint32_t assign(std::span<const float> vector) const;

  /// Binary "IVF1" file: header (dim, nlist, metric, nprobe, kmeans_iters,
  /// seed, size), centroids, then each list's ids and vectors.
  void save(const std::filesystem::path& path) const;
  /// `nprobe` overrides the saved value.
  static IvfIndex load(const std::filesystem::path& path,
                       std::optional<std::size_t> nprobe = std::nullopt);

  bool trained() const noexcept { return trained_; }
  bool sealed() const noexcept { return sealed_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t dim() const noexcept { return cfg_.dim; }
  std::size_t nlist() const noexcept { return cfg_.nlist; }
  const IvfConfig& config() const noexcept { return cfg_; }
  void set_nprobe(std::size_t nprobe);
  void set_backend(kernels::Backend backend) noexcept { cfg_.backend = backend; }
  const TrainStats& train_stats() const noexcept { return stats_; }

  std::span<const float> centroids() const noexcept { return centroids_; }
  std::span<const float> centroid(std::size_t list) const;
  std::span<const std::int64_t> list_ids(std::size_t list) const;
  std::span<const float> list_vectors(std::size_t list) const;
  std::size_t list_size(std::size_t list) const;
  bool contains(std::int64_t id) const { return ids_.count(id) != 0; }

 private:
  struct InvertedList {
    std::vector<std::int64_t> ids;
    std::vector<float> vectors;
  };

  std::vector<float> prepare(std::span<const float> v) const;
  void search_into(std::span<const float> query, std::size_t k, std::size_t nprobe,
                   std::vector<SearchHit>& out) const;

  IvfConfig cfg_;
  bool trained_ = false;
  bool sealed_ = false;
  std::size_t size_ = 0;
  std::vector<float> centroids_;
  std::vector<InvertedList> lists_;
  std::unordered_set<std::int64_t> ids_;
  TrainStats stats_;
};

}  // namespace adaptmt
