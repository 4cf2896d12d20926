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

// Serial vs OpenMP kernels. Each benchmark takes the backend as its first
// argument (0 = serial, 1 = OpenMP).

#include <benchmark/benchmark.h>

#include <vector>

#include "adaptmt/ann_index.hpp"
#include "adaptmt/kernels.hpp"
#include "adaptmt/random.hpp"

using namespace adaptmt;

namespace {

std::vector<float> uniform_rows(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed, 0);
  std::vector<float> rows(n * dim);
  for (auto& x : rows) x = static_cast<float>(rng.uniform01() - 0.5);
  return rows;
}

kernels::Backend backend_of(const benchmark::State& state) {
  return state.range(0) ? kernels::Backend::kOpenMP : kernels::Backend::kSerial;
}

void BM_AssignNearest(benchmark::State& state) {
  const std::size_t dim = 384, n = 20'000, k = static_cast<std::size_t>(state.range(1));
  const auto points = uniform_rows(n, dim, 1);
  const auto centroids = uniform_rows(k, dim, 2);
  std::vector<std::uint32_t> labels(n);
  std::vector<float> dists(n);
  for (auto _ : state) {
    kernels::assign_nearest(backend_of(state), points, centroids, dim, labels, dists);
    benchmark::DoNotOptimize(labels.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * k));
}
BENCHMARK(BM_AssignNearest)->ArgsProduct({{0, 1}, {64, 256}})->Unit(benchmark::kMillisecond);

void BM_ScoreRows(benchmark::State& state) {
  const std::size_t dim = 384, n = static_cast<std::size_t>(state.range(1));
  const auto rows = uniform_rows(n, dim, 3);
  const auto query = uniform_rows(1, dim, 4);
  std::vector<float> out(n);
  for (auto _ : state) {
    kernels::score_rows(backend_of(state), Metric::kCosine, query, rows, dim, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_ScoreRows)->ArgsProduct({{0, 1}, {2'000, 50'000}})->Unit(benchmark::kMicrosecond);

void BM_IvfTrain(benchmark::State& state) {
  IvfConfig cfg;
  cfg.dim = 384;
  cfg.nlist = 128;
  cfg.kmeans_iters = 10;
  cfg.backend = backend_of(state);
  const auto rows = uniform_rows(20'000, cfg.dim, 5);
  for (auto _ : state) {
    auto idx = IvfIndex::train_rows(rows, cfg);
    benchmark::DoNotOptimize(idx.centroids().data());
  }
}
BENCHMARK(BM_IvfTrain)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SearchBatch(benchmark::State& state) {
  IvfConfig cfg;
  cfg.dim = 384;
  cfg.nlist = 64;
  cfg.nprobe = 16;
  cfg.kmeans_iters = 5;
  cfg.backend = backend_of(state);
  const auto rows = uniform_rows(20'000, cfg.dim, 6);
  std::vector<std::int64_t> ids(20'000);
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::int64_t>(i);
  auto idx = IvfIndex::train_rows(rows, cfg);
  idx.add_rows(ids, rows);
  idx.seal();
  const auto queries = uniform_rows(500, cfg.dim, 7);
  for (auto _ : state) {
    auto hits = idx.search_batch(queries, 10);
    benchmark::DoNotOptimize(hits.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * 500));
}
BENCHMARK(BM_SearchBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
