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

#include "adaptmt/retrieval.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include "adaptmt/error.hpp"
#include "adaptmt/log.hpp"
#include "json.hpp"

namespace adaptmt {

using nlohmann::json;

namespace {

std::string pair_key(const SegmentPair& p) {
  std::string key = p.source;
  key.push_back('\x1f');
  key.append(p.target);
  return key;
}

std::vector<float> flatten_rows(const std::vector<EmbeddingVector>& vectors) {
  std::vector<float> rows;
  if (!vectors.empty()) rows.reserve(vectors.size() * vectors.front().dim());
  for (const auto& v : vectors) rows.insert(rows.end(), v.values.begin(), v.values.end());
  return rows;
}

}  // namespace

std::vector<FuzzyMatch> Reranker::rerank(std::vector<FuzzyMatch> matches,
                                         std::string_view /*query*/) const {
  return matches;
}

std::vector<FuzzyMatch> rerank(std::vector<FuzzyMatch> matches, std::string_view query) {
  return Reranker{}.rerank(std::move(matches), query);
}

ContextStore ContextStore::build(ParallelCorpus corpus, const EmbeddingProviderConfig& provider,
                                 const IvfConfig& ivf) {
  return build(std::move(corpus), make_provider(provider), ivf);
}

ContextStore ContextStore::build(ParallelCorpus corpus,
                                 std::shared_ptr<const EmbeddingProvider> provider,
                                 const IvfConfig& ivf) {
  if (corpus.empty()) throw Error(ErrorKind::kSize, "context corpus is empty");
  if (!provider) throw Error(ErrorKind::kArgument, "context store needs an embedding provider");
  if (provider->config().dim != ivf.dim) {
    throw Error(ErrorKind::kArgument, "provider dim " + std::to_string(provider->config().dim) +
                                          " differs from index dim " + std::to_string(ivf.dim));
  }
  if (ivf.metric == Metric::kL2 && !provider->config().normalize) {
    throw Error(ErrorKind::kArgument,
                "an L2 context index needs normalized embeddings to report cosine scores");
  }
  check_unique_ids(corpus);

  std::vector<std::string> sources;
  std::vector<std::int64_t> ids;
  sources.reserve(corpus.size());
  ids.reserve(corpus.size());
  for (const auto& p : corpus.pairs) {
    sources.push_back(p.source);
    ids.push_back(p.id);
  }
  const auto rows = flatten_rows(provider->embed(sources));

  ContextStore store;
  store.index_ = IvfIndex::train_rows(rows, ivf);
  store.index_.add_rows(ids, rows);
  store.index_.seal();
  store.provider_ = std::move(provider);
  store.pair_keys_.reserve(corpus.size());
  for (const auto& p : corpus.pairs) store.pair_keys_.push_back(pair_key(p));
  std::sort(store.pair_keys_.begin(), store.pair_keys_.end());
  store.corpus_ = std::move(corpus);
  log::debug("context store built: ", store.size(), " pairs");
  return store;
}

std::vector<FuzzyMatch> ContextStore::to_matches(const std::vector<SearchHit>& hits) const {
  std::vector<FuzzyMatch> out;
  out.reserve(hits.size());
  const bool cosine = index_.config().metric == Metric::kCosine;
  for (const auto& hit : hits) {
    const SegmentPair* pair = corpus_.find(hit.id);
    if (!pair) throw Error(ErrorKind::kState, "index id " + std::to_string(hit.id) + " not in corpus");
    // Unit vectors: ||a-b||² = 2 - 2cos(a,b).
    const double score = cosine ? hit.score : 1.0 + static_cast<double>(hit.score) / 2.0;
    out.push_back(FuzzyMatch{*pair, score});
  }
  return out;
}

std::vector<FuzzyMatch> ContextStore::retrieve(std::string_view source, std::size_t k) const {
  if (k == 0) throw Error(ErrorKind::kArgument, "k must be positive");
  const std::string query(source);
  const auto vecs = provider_->embed(std::span<const std::string>(&query, 1));
  return to_matches(index_.search(vecs.front().values, k));
}

std::vector<std::vector<FuzzyMatch>> ContextStore::retrieve_batch(
    std::span<const std::string> sources, std::size_t k) const {
  if (k == 0) throw Error(ErrorKind::kArgument, "k must be positive");
  std::vector<std::vector<FuzzyMatch>> out;
  if (sources.empty()) return out;
  const auto rows = flatten_rows(provider_->embed(sources));
  const auto hits = index_.search_batch(rows, k);
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(to_matches(h));
  return out;
}

std::vector<FuzzyMatch> ContextStore::retrieve_guarded(const SegmentPair& query,
                                                       std::size_t k) const {
  if (contains_pair(query)) {
    throw Error(ErrorKind::kValidation,
                "query pair " + std::to_string(query.id) + " is present in the context store");
  }
  return retrieve(query.source, k);
}

bool ContextStore::contains_pair(const SegmentPair& pair) const {
  return std::binary_search(pair_keys_.begin(), pair_keys_.end(), pair_key(pair));
}

std::vector<std::int64_t> ContextStore::find_leaks(const ParallelCorpus& queries) const {
  std::vector<std::int64_t> leaks;
  for (const auto& p : queries.pairs) {
    if (contains_pair(p)) leaks.push_back(p.id);
  }
  return leaks;
}

ContextStore build_context_store(ParallelCorpus corpus, const EmbeddingProviderConfig& provider,
                                 const IvfConfig& ivf) {
  return ContextStore::build(std::move(corpus), provider, ivf);
}

std::vector<FuzzyMatch> retrieve_fuzzy(const ContextStore& store, std::string_view source,
                                       std::size_t k) {
  return store.retrieve(source, k);
}

void write_retrieval_dump(std::ostream& out, const std::vector<RetrievalRecord>& records) {
  for (const auto& r : records) {
    json matches = json::array();
    for (const auto& m : r.matches) {
      matches.push_back({{"context_id", m.pair.id},
                         {"score", m.score},
                         {"source", m.pair.source},
                         {"target", m.pair.target}});
    }
    out << json{{"query_id", r.query_id}, {"matches", std::move(matches)}}.dump() << '\n';
  }
}

std::vector<RetrievalRecord> read_retrieval_dump(std::istream& in) {
  std::vector<RetrievalRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto obj = json::parse(line);
      RetrievalRecord r;
      r.query_id = obj.at("query_id").get<std::int64_t>();
      for (const auto& m : obj.at("matches")) {
        r.matches.push_back(FuzzyMatch{
            SegmentPair{m.at("context_id").get<std::int64_t>(), m.at("source").get<std::string>(),
                        m.at("target").get<std::string>()},
            m.at("score").get<double>()});
      }
      records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kValidation,
                  "retrieval dump line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace adaptmt
