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

#include "adaptmt/kernels.hpp"

#include <atomic>
#include <vector>

#include "adaptmt/random.hpp"
#include "doctest.h"

using namespace adaptmt;

namespace {

std::vector<float> random_rows(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<float> v(n * dim);
  for (auto& x : v) x = static_cast<float>(rng.uniform01() * 2.0 - 1.0);
  return v;
}

}  // namespace

TEST_CASE("serial and openmp kernels agree bit for bit") {
  for (std::size_t dim : {1u, 7u, 8u, 37u, 384u}) {
    const auto points = random_rows(513, dim, dim);
    const auto cents = random_rows(17, dim, dim + 1);
    std::vector<std::uint32_t> l1(513), l2(513);
    std::vector<float> d1(513), d2(513);
    kernels::assign_nearest(kernels::Backend::kSerial, points, cents, dim, l1, d1);
    kernels::assign_nearest(kernels::Backend::kOpenMP, points, cents, dim, l2, d2);
    CHECK(l1 == l2);
    CHECK(d1 == d2);

    std::vector<float> m1(513, 1e30f), m2(513, 1e30f);
    const std::span<const float> c0(cents.data(), dim);
    kernels::update_min_dist(kernels::Backend::kSerial, points, c0, dim, m1);
    kernels::update_min_dist(kernels::Backend::kOpenMP, points, c0, dim, m2);
    CHECK(m1 == m2);

    for (Metric m : {Metric::kL2, Metric::kCosine}) {
      std::vector<float> s1(513), s2(513);
      const std::span<const float> q(points.data(), dim);
      kernels::score_rows(kernels::Backend::kSerial, m, q, points, dim, s1);
      kernels::score_rows(kernels::Backend::kOpenMP, m, q, points, dim, s2);
      CHECK(s1 == s2);
    }
  }
}

TEST_CASE("assign_nearest picks the closest centroid") {
  const std::vector<float> cents = {0, 0, 10, 10};
  const std::vector<float> pts = {1, 1, 9, 8, 5, 5};
  std::vector<std::uint32_t> labels(3);
  std::vector<float> dists(3);
  kernels::assign_nearest(kernels::Backend::kSerial, pts, cents, 2, labels, dists);
  CHECK(labels == std::vector<std::uint32_t>{0, 1, 0});  // tie goes to the lower index
  CHECK(dists[0] == 2.0f);
}

TEST_CASE("parallel_for visits every index once") {
  for (auto b : {kernels::Backend::kSerial, kernels::Backend::kOpenMP}) {
    std::vector<std::atomic<int>> hits(1000);
    kernels::parallel_for(b, hits.size(), [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  CHECK(parse_metric("l2") == Metric::kL2);
  CHECK(parse_metric("cosine") == Metric::kCosine);
}
