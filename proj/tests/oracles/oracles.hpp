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

// Independent reference implementations used to check the library.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "adaptmt/ann_index.hpp"
#include "adaptmt/kernels.hpp"

namespace adaptmt::oracle {

/// Scores every row and sorts; no clustering involved. Rows must already be
/// prepared the way the index stores them (unit norm for cosine).
inline std::vector<SearchHit> exact_topk(Metric metric, std::span<const float> rows,
                                         std::span<const std::int64_t> ids, std::size_t dim,
                                         std::span<const float> query, std::size_t k) {
  std::vector<SearchHit> all;
  all.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    all.push_back({ids[i], kernels::score(metric, query.data(), rows.data() + i * dim, dim)});
  }
  std::sort(all.begin(), all.end(), [](const SearchHit& a, const SearchHit& b) {
    return a.score > b.score || (a.score == b.score && a.id < b.id);
  });
  if (all.size() > k) all.resize(k);
  return all;
}

inline double recall_at_k(const std::vector<SearchHit>& got, const std::vector<SearchHit>& truth) {
  if (truth.empty()) return 1.0;
  std::set<std::int64_t> t;
  for (const auto& h : truth) t.insert(h.id);
  std::size_t found = 0;
  for (const auto& h : got) found += t.count(h.id);
  return static_cast<double>(found) / static_cast<double>(truth.size());
}

/// Full-matrix word Levenshtein distance.
template <typename Seq>
std::int64_t levenshtein(const Seq& a, const Seq& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::int64_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<std::int64_t>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const std::int64_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

/// Minimum over all sequences of unconstrained block moves of
/// (number of moves + remaining edit distance). Breadth-first over
/// hypothesis rearrangements; only usable on very short inputs.
inline std::int64_t exhaustive_shift_edits(const std::vector<std::string>& hyp,
                                           const std::vector<std::string>& ref) {
  std::int64_t best = levenshtein(hyp, ref);
  std::map<std::vector<std::string>, std::int64_t> seen{{hyp, 0}};
  std::queue<std::vector<std::string>> frontier;
  frontier.push(hyp);
  while (!frontier.empty()) {
    auto cur = frontier.front();
    frontier.pop();
    const std::int64_t depth = seen[cur];
    best = std::min(best, depth + levenshtein(cur, ref));
    if (depth + 1 >= best) continue;
    const std::size_t n = cur.size();
    for (std::size_t start = 0; start < n; ++start) {
      for (std::size_t len = 1; start + len <= n; ++len) {
        std::vector<std::string> rest(cur.begin(), cur.begin() + static_cast<long>(start));
        rest.insert(rest.end(), cur.begin() + static_cast<long>(start + len), cur.end());
        for (std::size_t dest = 0; dest <= rest.size(); ++dest) {
          if (dest == start) continue;
          auto next = rest;
          next.insert(next.begin() + static_cast<long>(dest),
                      cur.begin() + static_cast<long>(start),
                      cur.begin() + static_cast<long>(start + len));
          if (seen.emplace(next, depth + 1).second) frontier.push(std::move(next));
        }
      }
    }
  }
  return best;
}

}  // namespace adaptmt::oracle
