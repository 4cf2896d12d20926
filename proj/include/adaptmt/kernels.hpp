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

// Dense-vector kernels behind the IVF index. Each kernel has a serial
// reference implementation and an OpenMP implementation with the same
// signature. Both evaluate every row with the same inline primitives below,
// so their outputs are bit-identical; only the row loop is parallelized.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace adaptmt {

enum class Metric : std::uint32_t { kL2 = 0, kCosine = 1 };

const char* to_string(Metric m) noexcept;
Metric parse_metric(const char* name);

namespace kernels {

enum class Backend { kSerial, kOpenMP };

/// Inner product with eight fixed accumulation lanes. The reduction order
/// is part of the contract: results do not depend on the backend.
inline float dot(const float* a, const float* b, std::size_t dim) noexcept {
  float acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  const std::size_t blocked = dim - dim % 8;
  std::size_t i = 0;
  for (; i < blocked; i += 8) {
    for (std::size_t l = 0; l < 8; ++l) acc[l] += a[i + l] * b[i + l];
  }
  float tail = 0.0f;
  for (; i < dim; ++i) tail += a[i] * b[i];
  return (((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7]))) +
         tail;
}

inline float l2_sqr(const float* a, const float* b, std::size_t dim) noexcept {
  float acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  const std::size_t blocked = dim - dim % 8;
  std::size_t i = 0;
  for (; i < blocked; i += 8) {
    for (std::size_t l = 0; l < 8; ++l) {
      const float d = a[i + l] - b[i + l];
      acc[l] += d * d;
    }
  }
  float tail = 0.0f;
  for (; i < dim; ++i) {
    const float d = a[i] - b[i];
    tail += d * d;
  }
  return (((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7]))) +
         tail;
}

/// Similarity score: inner product for cosine (inputs are unit vectors),
/// negative squared distance for L2. Larger is better for both.
inline float score(Metric metric, const float* q, const float* x, std::size_t dim) noexcept {
  return metric == Metric::kCosine ? dot(q, x, dim) : -l2_sqr(q, x, dim);
}

bool openmp_enabled() noexcept;
int max_threads() noexcept;

// Shapes: `points` is n × dim and `centroids` is k × dim, row-major.

namespace serial {

/// labels[i] = argmin_j ||points_i - centroids_j||² (lowest j on ties),
/// dists[i] = that squared distance.
void assign_nearest(std::span<const float> points, std::span<const float> centroids,
                    std::size_t dim, std::span<std::uint32_t> labels, std::span<float> dists);

/// min_dist[i] = min(min_dist[i], ||points_i - centroid||²).
void update_min_dist(std::span<const float> points, std::span<const float> centroid,
                     std::size_t dim, std::span<float> min_dist);

/// out[i] = score(metric, query, rows_i).
void score_rows(Metric metric, std::span<const float> query, std::span<const float> rows,
                std::size_t dim, std::span<float> out);

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace serial

namespace omp {

void assign_nearest(std::span<const float> points, std::span<const float> centroids,
                    std::size_t dim, std::span<std::uint32_t> labels, std::span<float> dists);
void update_min_dist(std::span<const float> points, std::span<const float> centroid,
                     std::size_t dim, std::span<float> min_dist);
void score_rows(Metric metric, std::span<const float> query, std::span<const float> rows,
                std::size_t dim, std::span<float> out);
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace omp

// Backend dispatch.
void assign_nearest(Backend b, std::span<const float> points, std::span<const float> centroids,
                    std::size_t dim, std::span<std::uint32_t> labels, std::span<float> dists);
void update_min_dist(Backend b, std::span<const float> points, std::span<const float> centroid,
                     std::size_t dim, std::span<float> min_dist);
void score_rows(Backend b, Metric metric, std::span<const float> query,
                std::span<const float> rows, std::size_t dim, std::span<float> out);
void parallel_for(Backend b, std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace kernels
}  // namespace adaptmt
