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

#include <cstring>
#include <string>

#include "adaptmt/error.hpp"
#include "adaptmt/kernels.hpp"

namespace adaptmt {

const char* to_string(Metric m) noexcept { return m == Metric::kCosine ? "cosine" : "l2"; }

Metric parse_metric(const char* name) {
  if (std::strcmp(name, "cosine") == 0) return Metric::kCosine;
  if (std::strcmp(name, "l2") == 0) return Metric::kL2;
  throw Error(ErrorKind::kArgument, std::string("unknown metric: ") + name);
}

namespace kernels::serial {

void assign_nearest(std::span<const float> points, std::span<const float> centroids,
                    std::size_t dim, std::span<std::uint32_t> labels, std::span<float> dists) {
  const std::size_t n = labels.size();
  const std::size_t k = centroids.size() / dim;
  for (std::size_t i = 0; i < n; ++i) {
    const float* p = points.data() + i * dim;
    std::uint32_t best = 0;
    float best_d = l2_sqr(p, centroids.data(), dim);
    for (std::size_t j = 1; j < k; ++j) {
      const float d = l2_sqr(p, centroids.data() + j * dim, dim);
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
  const std::size_t n = min_dist.size();
  for (std::size_t i = 0; i < n; ++i) {
    const float d = l2_sqr(points.data() + i * dim, centroid.data(), dim);
    if (d < min_dist[i]) min_dist[i] = d;
  }
}

void score_rows(Metric metric, std::span<const float> query, std::span<const float> rows,
                std::size_t dim, std::span<float> out) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = score(metric, query.data(), rows.data() + i * dim, dim);
  }
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace kernels::serial

namespace kernels {

void assign_nearest(Backend b, std::span<const float> points, std::span<const float> centroids,
                    std::size_t dim, std::span<std::uint32_t> labels, std::span<float> dists) {
  if (b == Backend::kOpenMP) {
    omp::assign_nearest(points, centroids, dim, labels, dists);
  } else {
    serial::assign_nearest(points, centroids, dim, labels, dists);
  }
}

void update_min_dist(Backend b, std::span<const float> points, std::span<const float> centroid,
                     std::size_t dim, std::span<float> min_dist) {
  if (b == Backend::kOpenMP) {
    omp::update_min_dist(points, centroid, dim, min_dist);
  } else {
    serial::update_min_dist(points, centroid, dim, min_dist);
  }
}

void score_rows(Backend b, Metric metric, std::span<const float> query,
                std::span<const float> rows, std::size_t dim, std::span<float> out) {
  if (b == Backend::kOpenMP) {
    omp::score_rows(metric, query, rows, dim, out);
  } else {
    serial::score_rows(metric, query, rows, dim, out);
  }
}

void parallel_for(Backend b, std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (b == Backend::kOpenMP) {
    omp::parallel_for(n, fn);
  } else {
    serial::parallel_for(n, fn);
  }
}

}  // namespace kernels
}  // namespace adaptmt
