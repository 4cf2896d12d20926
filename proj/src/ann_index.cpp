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

#include "adaptmt/ann_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "adaptmt/error.hpp"
#include "adaptmt/log.hpp"
#include "adaptmt/random.hpp"

namespace adaptmt {

namespace fs = std::filesystem;

namespace {

constexpr char kIndexMagic[4] = {'I', 'V', 'F', '1'};
constexpr double kUnitNormTolerance = 1e-6;
constexpr double kConvergenceShift = 1e-6;

std::vector<float> flatten(std::span<const EmbeddingVector> vectors, std::size_t dim) {
  std::vector<float> rows;
  rows.reserve(vectors.size() * dim);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].dim() != dim) {
      throw Error(ErrorKind::kArgument, "vector " + std::to_string(i) + " has dim " +
                                            std::to_string(vectors[i].dim()) + ", index dim is " +
                                            std::to_string(dim));
    }
    rows.insert(rows.end(), vectors[i].values.begin(), vectors[i].values.end());
  }
  return rows;
}

void kmeanspp_seed(std::span<const float> points, std::size_t n, std::size_t k, std::size_t dim,
                   Rng& rng, kernels::Backend backend, std::vector<float>& centroids) {
  centroids.assign(k * dim, 0.0f);
  std::vector<float> min_dist(n, std::numeric_limits<float>::infinity());
  std::size_t pick = rng.uniform_index(n);
  for (std::size_t c = 0; c < k; ++c) {
    if (c > 0) {
      double total = 0.0;
      for (float d : min_dist) total += d;
      if (!(total > 0.0)) {
        pick = rng.uniform_index(n);
      } else {
        const double target = rng.uniform01() * total;
        double acc = 0.0;
        pick = n;
        std::size_t last_positive = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (min_dist[i] > 0.0f) last_positive = i;
          acc += min_dist[i];
          if (acc > target && min_dist[i] > 0.0f) {
            pick = i;
            break;
          }
        }
        if (pick == n) pick = last_positive;
      }
    }
    std::copy_n(points.data() + pick * dim, dim, centroids.data() + c * dim);
    kernels::update_min_dist(backend, points,
                             std::span<const float>(centroids).subspan(c * dim, dim), dim,
                             min_dist);
  }
}

// Each empty cluster takes the farthest point of the currently largest
// cluster.
void fill_empty_clusters(std::vector<std::uint32_t>& labels, std::vector<float>& dists,
                         std::vector<std::size_t>& counts) {
  const std::size_t k = counts.size();
  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] != 0) continue;
    const std::size_t largest =
        static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    if (counts[largest] <= 1) break;
    std::size_t far = labels.size();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == largest && (far == labels.size() || dists[i] > dists[far])) far = i;
    }
    labels[far] = static_cast<std::uint32_t>(j);
    dists[far] = 0.0f;
    --counts[largest];
    counts[j] = 1;
  }
}

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::istream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace

void IvfConfig::validate() const {
  if (dim == 0) throw Error(ErrorKind::kArgument, "index dim must be positive");
  if (nlist == 0) throw Error(ErrorKind::kArgument, "nlist must be positive");
  if (nprobe == 0 || nprobe > nlist) {
    throw Error(ErrorKind::kArgument, "nprobe must be in [1, nlist]; got nprobe=" +
                                          std::to_string(nprobe) +
                                          " nlist=" + std::to_string(nlist));
  }
  if (kmeans_iters == 0) throw Error(ErrorKind::kArgument, "kmeans_iters must be positive");
}

std::pair<double, double> recommended_nlist_range(std::size_t n_train) {
  const double root = std::sqrt(static_cast<double>(n_train));
  return {4.0 * root, 16.0 * root};
}

std::optional<std::string> nlist_range_warning(std::size_t n_train, std::size_t nlist) {
  const auto [low, high] = recommended_nlist_range(n_train);
  const auto nl = static_cast<double>(nlist);
  if (nl >= low && nl <= high) return std::nullopt;
  std::ostringstream os;
  os << "nlist=" << nlist << " is outside the recommended range [" << std::llround(std::floor(low))
     << ", " << std::llround(std::floor(high)) << "] for " << n_train << " training vectors";
  return os.str();
}

std::vector<float> IvfIndex::prepare(std::span<const float> v) const {
  if (v.size() != cfg_.dim) {
    throw Error(ErrorKind::kArgument, "vector has dim " + std::to_string(v.size()) +
                                          ", index dim is " + std::to_string(cfg_.dim));
  }
  for (float x : v) {
    if (!std::isfinite(x)) throw Error(ErrorKind::kArgument, "vector has a non-finite entry");
  }
  std::vector<float> out(v.begin(), v.end());
  if (cfg_.metric == Metric::kCosine && std::abs(l2_norm(out) - 1.0) > kUnitNormTolerance) {
    l2_normalize(out);
  }
  return out;
}

IvfIndex IvfIndex::train(std::span<const EmbeddingVector> vectors, const IvfConfig& cfg) {
  cfg.validate();
  const auto rows = flatten(vectors, cfg.dim);
  return train_rows(rows, cfg);
}

IvfIndex IvfIndex::train_rows(std::span<const float> rows, const IvfConfig& cfg) {
  cfg.validate();
  if (rows.size() % cfg.dim != 0) {
    throw Error(ErrorKind::kArgument, "training matrix is not a whole number of rows");
  }
  const std::size_t n = rows.size() / cfg.dim;
  if (n < cfg.nlist) {
    throw Error(ErrorKind::kSize, "training needs at least nlist=" + std::to_string(cfg.nlist) +
                                      " vectors, got " + std::to_string(n));
  }

  IvfIndex index;
  index.cfg_ = cfg;
  const std::size_t dim = cfg.dim;
  const std::size_t k = cfg.nlist;

  std::vector<float> points;
  points.reserve(rows.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto p = index.prepare(rows.subspan(i * dim, dim));
    points.insert(points.end(), p.begin(), p.end());
  }

  if (auto warning = nlist_range_warning(n, k)) {
    log::warn(*warning);
    index.stats_.warning = std::move(warning);
  }

  Rng rng(cfg.seed, /*stream=*/7);
  kmeanspp_seed(points, n, k, dim, rng, cfg.backend, index.centroids_);

  std::vector<std::uint32_t> labels(n);
  std::vector<float> dists(n);
  std::vector<std::size_t> counts(k);
  std::vector<double> sums(k * dim);
  for (std::size_t it = 1; it <= cfg.kmeans_iters; ++it) {
    kernels::assign_nearest(cfg.backend, points, index.centroids_, dim, labels, dists);
    std::fill(counts.begin(), counts.end(), 0);
    for (auto l : labels) ++counts[l];
    fill_empty_clusters(labels, dists, counts);

    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double* s = sums.data() + labels[i] * dim;
      const float* p = points.data() + i * dim;
      for (std::size_t d = 0; d < dim; ++d) s[d] += p[d];
    }
    double max_shift = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) continue;
      double shift = 0.0;
      float* c = index.centroids_.data() + j * dim;
      for (std::size_t d = 0; d < dim; ++d) {
        const auto updated = static_cast<float>(sums[j * dim + d] / static_cast<double>(counts[j]));
        const double delta = static_cast<double>(updated) - c[d];
        shift += delta * delta;
        c[d] = updated;
      }
      max_shift = std::max(max_shift, std::sqrt(shift));
    }
    index.stats_.iterations = it;
    if (max_shift < kConvergenceShift) {
      index.stats_.converged = true;
      break;
    }
  }

  index.lists_.assign(k, InvertedList{});
  index.trained_ = true;
  log::debug("trained IVF index: n=", n, " nlist=", k, " iterations=", index.stats_.iterations);
  return index;
}

void IvfIndex::add(std::span<const std::int64_t> ids, std::span<const EmbeddingVector> vectors) {
  if (ids.size() != vectors.size()) {
    throw Error(ErrorKind::kArgument, "add: ids and vectors differ in length");
  }
  add_rows(ids, flatten(vectors, cfg_.dim));
}

void IvfIndex::add_rows(std::span<const std::int64_t> ids, std::span<const float> rows) {
  if (!trained_) throw Error(ErrorKind::kState, "add on an untrained index");
  if (sealed_) throw Error(ErrorKind::kState, "add on a sealed index");
  const std::size_t dim = cfg_.dim;
  if (rows.size() != ids.size() * dim) {
    throw Error(ErrorKind::kArgument, "add: rows do not match ids × dim");
  }
  {
    std::unordered_set<std::int64_t> batch;
    for (auto id : ids) {
      if (ids_.count(id) || !batch.insert(id).second) {
        throw Error(ErrorKind::kConflict, "id " + std::to_string(id) + " is already indexed");
      }
    }
  }
  std::vector<float> prepared;
  prepared.reserve(rows.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto p = prepare(rows.subspan(i * dim, dim));
    prepared.insert(prepared.end(), p.begin(), p.end());
  }
  std::vector<std::uint32_t> labels(ids.size());
  std::vector<float> dists(ids.size());
  kernels::assign_nearest(cfg_.backend, prepared, centroids_, dim, labels, dists);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto& list = lists_[labels[i]];
    list.ids.push_back(ids[i]);
    list.vectors.insert(list.vectors.end(), prepared.begin() + i * dim,
                        prepared.begin() + (i + 1) * dim);
    ids_.insert(ids[i]);
  }
  size_ += ids.size();
}

std::uint32_t IvfIndex::assign(std::span<const float> vector) const {
  if (!trained_) throw Error(ErrorKind::kState, "assign on an untrained index");
  const auto p = prepare(vector);
  std::uint32_t label = 0;
  float dist = 0.0f;
  kernels::serial::assign_nearest(p, centroids_, cfg_.dim, std::span(&label, 1),
                                  std::span(&dist, 1));
  return label;
}

std::vector<std::uint32_t> IvfIndex::probe_lists(std::span<const float> query,
                                                 std::size_t nprobe) const {
  const std::size_t k = cfg_.nlist;
  nprobe = std::min(nprobe, k);
  std::vector<float> dists(k);
  for (std::size_t j = 0; j < k; ++j) {
    dists[j] = kernels::l2_sqr(query.data(), centroids_.data() + j * cfg_.dim, cfg_.dim);
  }
  std::vector<std::uint32_t> order(k);
  for (std::size_t j = 0; j < k; ++j) order[j] = static_cast<std::uint32_t>(j);
  auto closer = [&](std::uint32_t a, std::uint32_t b) {
    return dists[a] < dists[b] || (dists[a] == dists[b] && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(nprobe),
                    order.end(), closer);
  order.resize(nprobe);
  return order;
}

void IvfIndex::search_into(std::span<const float> query, std::size_t k, std::size_t nprobe,
                           std::vector<SearchHit>& out) const {
  out.clear();
  const auto q = prepare(query);
  const auto probes = probe_lists(q, nprobe);
  std::vector<float> scores;
  for (auto list_no : probes) {
    const auto& list = lists_[list_no];
    scores.resize(list.ids.size());
    kernels::score_rows(cfg_.backend, cfg_.metric, q, list.vectors, cfg_.dim, scores);
    for (std::size_t i = 0; i < list.ids.size(); ++i) out.push_back({list.ids[i], scores[i]});
  }
  if (out.size() > k) {
    std::nth_element(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k - 1), out.end(),
                     hit_before);
    out.resize(k);
  }
  std::sort(out.begin(), out.end(), hit_before);
}

std::vector<SearchHit> IvfIndex::search(std::span<const float> query, std::size_t k,
                                        std::optional<std::size_t> nprobe) const {
  if (!trained_) throw Error(ErrorKind::kState, "search on an untrained index");
  if (k == 0) throw Error(ErrorKind::kArgument, "k must be positive");
  if (nprobe && *nprobe == 0) throw Error(ErrorKind::kArgument, "nprobe must be positive");
  std::vector<SearchHit> out;
  if (size_ == 0) {
    prepare(query);
    return out;
  }
  search_into(query, k, nprobe.value_or(cfg_.nprobe), out);
  return out;
}

std::vector<std::vector<SearchHit>> IvfIndex::search_batch(std::span<const float> queries,
                                                           std::size_t k,
                                                           std::optional<std::size_t> nprobe) const {
  if (!trained_) throw Error(ErrorKind::kState, "search on an untrained index");
  if (k == 0) throw Error(ErrorKind::kArgument, "k must be positive");
  if (nprobe && *nprobe == 0) throw Error(ErrorKind::kArgument, "nprobe must be positive");
  if (queries.size() % cfg_.dim != 0) {
    throw Error(ErrorKind::kArgument, "query matrix is not a whole number of rows");
  }
  const std::size_t nq = queries.size() / cfg_.dim;
  std::vector<std::vector<SearchHit>> out(nq);
  if (size_ == 0) return out;
  const std::size_t np = nprobe.value_or(cfg_.nprobe);
  // Row scoring inside each query stays serial; parallelism is across queries.
  IvfIndex const* self = this;
  kernels::parallel_for(cfg_.backend, nq, [&](std::size_t i) {
    self->search_into(queries.subspan(i * cfg_.dim, cfg_.dim), k, np, out[i]);
  });
  return out;
}

void IvfIndex::set_nprobe(std::size_t nprobe) {
  if (nprobe == 0 || nprobe > cfg_.nlist) {
    throw Error(ErrorKind::kArgument, "nprobe must be in [1, nlist]");
  }
  cfg_.nprobe = nprobe;
}

std::span<const float> IvfIndex::centroid(std::size_t list) const {
  return std::span<const float>(centroids_).subspan(list * cfg_.dim, cfg_.dim);
}

std::span<const std::int64_t> IvfIndex::list_ids(std::size_t list) const {
  return lists_.at(list).ids;
}

std::span<const float> IvfIndex::list_vectors(std::size_t list) const {
  return lists_.at(list).vectors;
}

std::size_t IvfIndex::list_size(std::size_t list) const { return lists_.at(list).ids.size(); }

void IvfIndex::save(const fs::path& path) const {
  if (!trained_) throw Error(ErrorKind::kState, "cannot save an untrained index");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out.write(kIndexMagic, 4);
  write_pod(out, static_cast<std::uint32_t>(cfg_.dim));
  write_pod(out, static_cast<std::uint32_t>(cfg_.nlist));
  write_pod(out, static_cast<std::uint32_t>(cfg_.metric));
  write_pod(out, static_cast<std::uint32_t>(cfg_.nprobe));
  write_pod(out, static_cast<std::uint32_t>(cfg_.kmeans_iters));
  write_pod(out, cfg_.seed);
  write_pod(out, static_cast<std::uint64_t>(size_));
  out.write(reinterpret_cast<const char*>(centroids_.data()),
            static_cast<std::streamsize>(centroids_.size() * sizeof(float)));
  for (const auto& list : lists_) {
    write_pod(out, static_cast<std::uint64_t>(list.ids.size()));
    out.write(reinterpret_cast<const char*>(list.ids.data()),
              static_cast<std::streamsize>(list.ids.size() * sizeof(std::int64_t)));
    out.write(reinterpret_cast<const char*>(list.vectors.data()),
              static_cast<std::streamsize>(list.vectors.size() * sizeof(float)));
  }
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

IvfIndex IvfIndex::load(const fs::path& path, std::optional<std::size_t> nprobe) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  char magic[4];
  std::uint32_t dim = 0, nlist = 0, metric = 0, saved_nprobe = 0, kmeans_iters = 0;
  std::uint64_t seed = 0, size = 0;
  in.read(magic, 4);
  read_pod(in, dim);
  read_pod(in, nlist);
  read_pod(in, metric);
  read_pod(in, saved_nprobe);
  read_pod(in, kmeans_iters);
  read_pod(in, seed);
  read_pod(in, size);
  if (!in || std::memcmp(magic, kIndexMagic, 4) != 0) {
    throw Error(ErrorKind::kValidation, path.string() + " is not an IVF1 index file");
  }
  if (dim == 0 || nlist == 0 || metric > 1 || saved_nprobe == 0 || saved_nprobe > nlist) {
    throw Error(ErrorKind::kValidation, path.string() + " has an invalid header");
  }
  IvfIndex index;
  index.cfg_.dim = dim;
  index.cfg_.nlist = nlist;
  index.cfg_.metric = static_cast<Metric>(metric);
  index.cfg_.nprobe = std::min<std::size_t>(nprobe.value_or(saved_nprobe), nlist);
  index.cfg_.kmeans_iters = kmeans_iters;
  index.cfg_.seed = seed;
  index.centroids_.resize(static_cast<std::size_t>(nlist) * dim);
  in.read(reinterpret_cast<char*>(index.centroids_.data()),
          static_cast<std::streamsize>(index.centroids_.size() * sizeof(float)));
  index.lists_.resize(nlist);
  std::size_t total = 0;
  for (auto& list : index.lists_) {
    std::uint64_t len = 0;
    read_pod(in, len);
    if (!in || len > size) throw Error(ErrorKind::kValidation, path.string() + " is truncated");
    list.ids.resize(len);
    list.vectors.resize(len * dim);
    in.read(reinterpret_cast<char*>(list.ids.data()),
            static_cast<std::streamsize>(len * sizeof(std::int64_t)));
    in.read(reinterpret_cast<char*>(list.vectors.data()),
            static_cast<std::streamsize>(len * dim * sizeof(float)));
    for (auto id : list.ids) {
      if (!index.ids_.insert(id).second) {
        throw Error(ErrorKind::kValidation, path.string() + " repeats id " + std::to_string(id));
      }
    }
    total += len;
  }
  if (!in || total != size) {
    throw Error(ErrorKind::kValidation, path.string() + " list lengths do not sum to size");
  }
  index.size_ = size;
  index.trained_ = true;
  return index;
}

}  // namespace adaptmt
