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

#include "adaptmt/embedding.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>

#include "adaptmt/error.hpp"
#include "adaptmt/http.hpp"
#include "adaptmt/log.hpp"
#include "adaptmt/parallel.hpp"
#include "adaptmt/random.hpp"
#include "adaptmt/text.hpp"
#include "json.hpp"

namespace adaptmt {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "binary formats are written in host order and assume little-endian");

void EmbeddingProviderConfig::validate() const {
  if (dim == 0) throw Error(ErrorKind::kArgument, "embedding dim must be positive");
  if (batch_size == 0) throw Error(ErrorKind::kArgument, "embedding batch_size must be positive");
  if (max_in_flight == 0) throw Error(ErrorKind::kArgument, "max_in_flight must be positive");
  if (attempts <= 0) throw Error(ErrorKind::kArgument, "attempts must be positive");
  if (kind == ProviderKind::kRemoteHttp && endpoint.empty()) {
    throw Error(ErrorKind::kArgument, "remote embedding provider needs an endpoint");
  }
}

std::uint64_t text_hash(std::string_view text) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

double l2_norm(std::span<const float> v) {
  double sum = 0.0;
  for (float x : v) sum += static_cast<double>(x) * x;
  return std::sqrt(sum);
}

void l2_normalize(std::span<float> v) {
  const double norm = l2_norm(v);
  if (norm == 0.0 || !std::isfinite(norm)) {
    std::fill(v.begin(), v.end(), 0.0f);
    if (!v.empty()) v[0] = 1.0f;
    return;
  }
  for (float& x : v) x = static_cast<float>(x / norm);
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::kArgument, "cosine of vectors of unequal length");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += static_cast<double>(a[i]) * b[i];
  const double denom = l2_norm(a) * l2_norm(b);
  return denom == 0.0 ? 0.0 : dot / denom;
}

namespace {

std::uint64_t gram_hash(std::u32string_view gram) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char32_t cp : gram) {
    for (int shift = 0; shift < 32; shift += 8) {
      h ^= (cp >> shift) & 0xFF;
      h *= 0x100000001B3ULL;
    }
  }
  return h;
}

}  // namespace

EmbeddingVector deterministic_embed(std::string_view text_in, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw Error(ErrorKind::kArgument, "embedding dim must be positive");
  EmbeddingVector out;
  out.values.assign(dim, 0.0f);
  out.normalized = true;

  std::u32string cps = text::decode_utf8(text_in);
  for (char32_t& cp : cps) cp = text::to_lower(cp);
  if (cps.empty()) {
    out.values[0] = 1.0f;
    return out;
  }

  const std::uint64_t seed_mix = splitmix64(seed);
  std::vector<double> acc(dim, 0.0);
  auto add_gram = [&](std::u32string_view gram) {
    const std::uint64_t h = splitmix64(gram_hash(gram) ^ seed_mix);
    const std::size_t bucket = static_cast<std::size_t>(h % dim);
    acc[bucket] += (h >> 63) ? -1.0 : 1.0;
  };
  const std::u32string_view view(cps);
  if (cps.size() < 3) {
    add_gram(view);
  } else {
    for (std::size_t n = 3; n <= 5; ++n) {
      for (std::size_t i = 0; i + n <= cps.size(); ++i) add_gram(view.substr(i, n));
    }
  }

  double norm = 0.0;
  for (double x : acc) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) {
    out.values[0] = 1.0f;
    return out;
  }
  for (std::size_t i = 0; i < dim; ++i) out.values[i] = static_cast<float>(acc[i] / norm);
  return out;
}

namespace {

class DeterministicProvider final : public EmbeddingProvider {
 public:
  explicit DeterministicProvider(EmbeddingProviderConfig cfg) : cfg_(std::move(cfg)) {}

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(deterministic_embed(t, cfg_.dim, cfg_.seed));
    return out;
  }

  const EmbeddingProviderConfig& config() const noexcept override { return cfg_; }

 private:
  EmbeddingProviderConfig cfg_;
};

class RemoteProvider final : public EmbeddingProvider {
 public:
  explicit RemoteProvider(EmbeddingProviderConfig cfg) : cfg_(std::move(cfg)) {
    http::parse_url(cfg_.endpoint);
  }

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override {
    std::vector<EmbeddingVector> out(texts.size());
    const std::size_t n_batches = (texts.size() + cfg_.batch_size - 1) / cfg_.batch_size;
    run_bounded(n_batches, cfg_.max_in_flight, [&](std::size_t b) {
      const std::size_t begin = b * cfg_.batch_size;
      const std::size_t end = std::min(texts.size(), begin + cfg_.batch_size);
      auto batch = request(texts.subspan(begin, end - begin), begin);
      for (std::size_t i = 0; i < batch.size(); ++i) out[begin + i] = std::move(batch[i]);
    });
    return out;
  }

  const EmbeddingProviderConfig& config() const noexcept override { return cfg_; }

 private:
  std::vector<EmbeddingVector> request(std::span<const std::string> texts,
                                       std::size_t first_index) const {
    json body = {{"model", cfg_.model_name}, {"input", json::array()}};
    for (const auto& t : texts) body["input"].push_back(t);
    const std::string payload = body.dump();

    http::RequestOptions opts;
    opts.timeout = cfg_.timeout;
    opts.headers = http::auth_headers(cfg_.api_key_env);

    http::Response res;
    auto backoff = cfg_.initial_backoff;
    for (int attempt = 1; attempt <= cfg_.attempts; ++attempt) {
      res = http::post_json(cfg_.endpoint, payload, opts);
      if (res.status == 200) return parse(res.body, texts.size());
      log::warn("embedding request failed (attempt ", attempt, "/", cfg_.attempts, "): ",
                res.status ? "HTTP " + std::to_string(res.status) : res.error);
      if (attempt < cfg_.attempts) {
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
    }
    std::vector<std::int64_t> ids;
    for (std::size_t i = 0; i < texts.size(); ++i) ids.push_back(static_cast<std::int64_t>(first_index + i));
    throw TransportError(ErrorKind::kProvider,
                         "embedding provider failed after " + std::to_string(cfg_.attempts) +
                             " attempts (HTTP " + std::to_string(res.status) + ")",
                         std::move(ids), res.status);
  }

  std::vector<EmbeddingVector> parse(const std::string& body, std::size_t expected) const {
    json doc;
    try {
      doc = json::parse(body);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kContract, std::string("embedding response is not JSON: ") + e.what());
    }
    if (!doc.contains("data") || !doc["data"].is_array()) {
      throw Error(ErrorKind::kContract, "embedding response has no \"data\" array");
    }
    const auto& data = doc["data"];
    if (data.size() != expected) {
      throw Error(ErrorKind::kContract, "embedding response has " + std::to_string(data.size()) +
                                            " rows, expected " + std::to_string(expected));
    }
    std::vector<EmbeddingVector> out(expected);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& row = data[i];
      const std::size_t slot = row.contains("index") ? row["index"].get<std::size_t>() : i;
      if (slot >= expected || !row.contains("embedding")) {
        throw Error(ErrorKind::kContract, "malformed embedding row " + std::to_string(i));
      }
      auto values = row["embedding"].get<std::vector<float>>();
      if (values.size() != cfg_.dim) {
        throw Error(ErrorKind::kContract, "embedding dim mismatch: got " +
                                              std::to_string(values.size()) + ", configured " +
                                              std::to_string(cfg_.dim));
      }
      for (float x : values) {
        if (!std::isfinite(x)) throw Error(ErrorKind::kContract, "non-finite embedding value");
      }
      out[slot].values = std::move(values);
      if (cfg_.normalize) {
        l2_normalize(out[slot].values);
        out[slot].normalized = true;
      }
    }
    return out;
  }

  EmbeddingProviderConfig cfg_;
};

}  // namespace

std::shared_ptr<const EmbeddingProvider> make_provider(const EmbeddingProviderConfig& cfg) {
  cfg.validate();
  if (cfg.kind == ProviderKind::kRemoteHttp) return std::make_shared<RemoteProvider>(cfg);
  return std::make_shared<DeterministicProvider>(cfg);
}

std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts,
                                         const EmbeddingProviderConfig& cfg) {
  if (texts.empty()) throw Error(ErrorKind::kArgument, "embed_batch needs at least one text");
  return make_provider(cfg)->embed(texts);
}

namespace {

constexpr char kCacheMagic[4] = {'E', 'M', 'B', '1'};

}  // namespace

void write_embedding_cache(const fs::path& path, const EmbeddingCache& cache) {
  if (cache.dim == 0 || cache.data.size() % cache.dim != 0) {
    throw Error(ErrorKind::kArgument, "embedding cache data is not a whole number of rows");
  }
  const std::uint64_t count = cache.count();
  if (cache.text_hashes.size() != count || (!cache.ids.empty() && cache.ids.size() != count)) {
    throw Error(ErrorKind::kArgument, "embedding cache sidecar length does not match rows");
  }
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
    const auto dim32 = static_cast<std::uint32_t>(cache.dim);
    out.write(kCacheMagic, 4);
    out.write(reinterpret_cast<const char*>(&dim32), sizeof dim32);
    out.write(reinterpret_cast<const char*>(&count), sizeof count);
    out.write(reinterpret_cast<const char*>(cache.data.data()),
              static_cast<std::streamsize>(cache.data.size() * sizeof(float)));
    if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
  }
  json side = {{"schema_version", 1},
               {"model", cache.model_name},
               {"dim", cache.dim},
               {"count", count},
               {"text_hashes", json::array()},
               {"ids", cache.ids}};
  for (auto h : cache.text_hashes) side["text_hashes"].push_back(h);
  std::ofstream sidecar(fs::path(path.string() + ".json"), std::ios::binary);
  if (!sidecar) throw Error(ErrorKind::kIo, "cannot write sidecar for " + path.string());
  sidecar << side.dump(2) << '\n';
}

EmbeddingCache read_embedding_cache(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  char magic[4];
  std::uint32_t dim = 0;
  std::uint64_t count = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!in || std::memcmp(magic, kCacheMagic, 4) != 0 || dim == 0) {
    throw Error(ErrorKind::kValidation, path.string() + " is not an embedding cache");
  }
  EmbeddingCache cache;
  cache.dim = dim;
  cache.data.resize(static_cast<std::size_t>(count) * dim);
  in.read(reinterpret_cast<char*>(cache.data.data()),
          static_cast<std::streamsize>(cache.data.size() * sizeof(float)));
  if (!in) throw Error(ErrorKind::kValidation, path.string() + " is truncated");

  std::ifstream side_in(fs::path(path.string() + ".json"));
  if (!side_in) throw Error(ErrorKind::kIo, "missing sidecar " + path.string() + ".json");
  json side;
  try {
    side = json::parse(side_in);
    cache.model_name = side.at("model").get<std::string>();
    cache.text_hashes = side.at("text_hashes").get<std::vector<std::uint64_t>>();
    if (side.contains("ids")) cache.ids = side["ids"].get<std::vector<std::int64_t>>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation, "bad embedding sidecar: " + std::string(e.what()));
  }
  if (cache.text_hashes.size() != count || (!cache.ids.empty() && cache.ids.size() != count)) {
    throw Error(ErrorKind::kValidation, "embedding sidecar row count does not match binary");
  }
  return cache;
}

}  // namespace adaptmt
