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
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adaptmt/ann_index.hpp"
#include "adaptmt/corpus.hpp"
#include "adaptmt/embedding.hpp"

namespace adaptmt {

/// A context-dataset pair retrieved for a query, with its cosine similarity.
struct FuzzyMatch {
  SegmentPair pair;
  double score = 0.0;

  friend bool operator==(const FuzzyMatch&, const FuzzyMatch&) = default;
};

/// Extension point for a second-stage scorer over retrieved candidates.
/// The default does nothing: matches come back unchanged.
class Reranker {
 public:
  virtual ~Reranker() = default;
  virtual std::vector<FuzzyMatch> rerank(std::vector<FuzzyMatch> matches,
                                         std::string_view query) const;
};

/// Identity re-ranking.
std::vector<FuzzyMatch> rerank(std::vector<FuzzyMatch> matches, std::string_view query);

/// Translation memory: the context corpus plus an IVF index over the
/// embeddings of its source sides. Immutable once built.
class ContextStore {
 public:
  /// Embeds every source side, trains the index on those embeddings and adds
  /// them under the pair ids.
  static ContextStore build(ParallelCorpus corpus, const EmbeddingProviderConfig& provider,
                            const IvfConfig& ivf);
  static ContextStore build(ParallelCorpus corpus,
                            std::shared_ptr<const EmbeddingProvider> provider,
                            const IvfConfig& ivf);

  /// Top-k matches by descending cosine similarity; fewer than k when the
  /// store is smaller.
  std::vector<FuzzyMatch> retrieve(std::string_view source, std::size_t k = 1) const;
  std::vector<std::vector<FuzzyMatch>> retrieve_batch(std::span<const std::string> sources,
                                                      std::size_t k = 1) const;

  /// Like retrieve(), but first asserts the query pair itself is not stored.
  std::vector<FuzzyMatch> retrieve_guarded(const SegmentPair& query, std::size_t k = 1) const;

  /// True when an exact (source, target) copy of the pair is stored.
  bool contains_pair(const SegmentPair& pair) const;
  /// Ids of `queries` whose exact pair is present in the store.
  std::vector<std::int64_t> find_leaks(const ParallelCorpus& queries) const;

  const ParallelCorpus& corpus() const noexcept { return corpus_; }
  const IvfIndex& index() const noexcept { return index_; }
  const EmbeddingProvider& provider() const noexcept { return *provider_; }
  const EmbeddingProviderConfig& provider_config() const noexcept { return provider_->config(); }
  std::size_t size() const noexcept { return corpus_.size(); }
  bool empty() const noexcept { return corpus_.empty(); }

 private:
  std::vector<FuzzyMatch> to_matches(const std::vector<SearchHit>& hits) const;

  ParallelCorpus corpus_;
  IvfIndex index_;
  std::shared_ptr<const EmbeddingProvider> provider_;
  std::vector<std::string> pair_keys_;  // sorted (source \x1f target) keys
};

ContextStore build_context_store(ParallelCorpus corpus, const EmbeddingProviderConfig& provider,
                                 const IvfConfig& ivf);
std::vector<FuzzyMatch> retrieve_fuzzy(const ContextStore& store, std::string_view source,
                                       std::size_t k = 1);

/// One line of the retrieval dump.
struct RetrievalRecord {
  std::int64_t query_id = 0;
  std::vector<FuzzyMatch> matches;

  friend bool operator==(const RetrievalRecord&, const RetrievalRecord&) = default;
};

/// JSON lines: {"query_id", "matches": [{"context_id", "score", "source", "target"}]}.
void write_retrieval_dump(std::ostream& out, const std::vector<RetrievalRecord>& records);
std::vector<RetrievalRecord> read_retrieval_dump(std::istream& in);

}  // namespace adaptmt
