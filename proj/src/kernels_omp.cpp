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

#include <cstdint>
#include <exception>
#include <mutex>

#include "adaptmt/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace adaptmt::kernels {

bool openmp_enabled() noexcept {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace omp {

void assign_nearest(std::span<const float> points, std::span<const float> centroids,
                    std::size_t dim, std::span<std::uint32_t> labels, std::span<float> dists) {
  const auto n = static_cast<std::int64_t>(labels.size());
  const std::size_t k = centroids.size() / dim;
  const float* pts = points.data();
  const float* cen = centroids.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const float* p = pts + static_cast<std::size_t>(i) * dim;
    std::uint32_t best = 0;
    float best_d = l2_sqr(p, cen, dim);
    for (std::size_t j = 1; j < k; ++j) {
      const float d = l2_sqr(p, cen + j * dim, dim);
      if (d < best_d) {
        best_d = d;
        best = static_cast<std::uint32_t>(j);
      }
    }
    labels[i] = best;
    dists[i] = best_d;
  }
}

void update_min_dist(std::span<const float> points, std::span<const float> centroid,
                     std::size_t dim, std::span<float> min_dist) {
  const auto n = static_cast<std::int64_t>(min_dist.size());
  const float* pts = points.data();
  const float* c = centroid.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const float d = l2_sqr(pts + static_cast<std::size_t>(i) * dim, c, dim);
    if (d < min_dist[i]) min_dist[i] = d;
  }
}

void score_rows(Metric metric, std::span<const float> query, std::span<const float> rows,
                std::size_t dim, std::span<float> out) {
  const auto n = static_cast<std::int64_t>(out.size());
  const float* q = query.data();
  const float* r = rows.data();
#pragma omp parallel for schedule(static) if (n * static_cast<std::int64_t>(dim) > 65536)
  for (std::int64_t i = 0; i < n; ++i) {
    out[i] = score(metric, q, r + static_cast<std::size_t>(i) * dim, dim);
  }
}

void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)>& fn) {
  const auto n = static_cast<std::int64_t>(n_tasks);
  std::exception_ptr first_error;
  std::int64_t first_index = n;
  std::mutex mu;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(mu);
      if (i < first_index) {
        first_index = i;
        first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace omp
}  // namespace adaptmt::kernels
