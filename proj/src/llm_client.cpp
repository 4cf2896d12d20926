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

#include "adaptmt/llm_client.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "adaptmt/error.hpp"
#include "adaptmt/http.hpp"
#include "adaptmt/log.hpp"
#include "adaptmt/parallel.hpp"
#include "adaptmt/text.hpp"
#include "httplib.h"

namespace adaptmt {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

const char* to_string(DecodingMode m) noexcept {
  return m == DecodingMode::kGreedy ? "greedy" : "sampled";
}

DecodingMode parse_decoding_mode(const std::string& name) {
  if (name == "greedy") return DecodingMode::kGreedy;
  if (name == "sampled") return DecodingMode::kSampled;
  throw Error(ErrorKind::kArgument, "unknown decoding mode: " + name);
}

void DecodingParams::validate() const {
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorKind::kArgument, "temperature must be >= 0");
  }
  if (!(top_p > 0.0 && top_p <= 1.0)) throw Error(ErrorKind::kArgument, "top_p must be in (0, 1]");
  if (stop_sequences.empty()) throw Error(ErrorKind::kArgument, "stop_sequences must be non-empty");
  for (const auto& s : stop_sequences) {
    if (s.empty()) throw Error(ErrorKind::kArgument, "empty stop sequence");
  }
}

double DecodingParams::wire_temperature() const noexcept {
  return mode == DecodingMode::kGreedy ? 0.0 : temperature;
}

std::vector<TranslationRequestBatch> make_batches(std::span<const RenderedPrompt> prompts,
                                                  std::span<const std::string> sources,
                                                  std::size_t batch_size,
                                                  std::size_t token_multiplier,
                                                  const DecodingParams& params,
                                                  std::span<const std::int64_t> ids) {
  if (prompts.size() != sources.size()) {
    throw Error(ErrorKind::kArgument, std::to_string(prompts.size()) + " prompts but " +
                                          std::to_string(sources.size()) + " sources");
  }
  if (!ids.empty() && ids.size() != prompts.size()) {
    throw Error(ErrorKind::kArgument, "ids and prompts differ in length");
  }
  if (batch_size == 0) throw Error(ErrorKind::kArgument, "batch_size must be positive");
  if (token_multiplier == 0) throw Error(ErrorKind::kArgument, "token_multiplier must be positive");
  params.validate();

  std::vector<TranslationRequestBatch> batches;
  for (std::size_t begin = 0; begin < prompts.size(); begin += batch_size) {
    const std::size_t end = std::min(prompts.size(), begin + batch_size);
    TranslationRequestBatch b;
    b.params = params;
    std::size_t longest = 0;
    for (std::size_t i = begin; i < end; ++i) {
      b.ids.push_back(ids.empty() ? static_cast<std::int64_t>(i) : ids[i]);
      b.prompts.push_back(prompts[i]);
      b.sources.push_back(sources[i]);
      longest = std::max(longest, text::count_words(sources[i]));
    }
    b.params.max_tokens = std::max<std::size_t>(1, longest * token_multiplier);
    batches.push_back(std::move(b));
  }
  return batches;
}

std::vector<TranslationRequestBatch> make_batches(const std::vector<PromptRecord>& records,
                                                  std::size_t batch_size,
                                                  std::size_t token_multiplier,
                                                  const DecodingParams& params) {
  std::vector<RenderedPrompt> prompts;
  std::vector<std::string> sources;
  std::vector<std::int64_t> ids;
  prompts.reserve(records.size());
  sources.reserve(records.size());
  ids.reserve(records.size());
  for (const auto& r : records) {
    prompts.push_back(r.prompt);
    sources.push_back(r.source);
    ids.push_back(r.id);
  }
  return make_batches(prompts, sources, batch_size, token_multiplier, params, ids);
}

std::string postprocess_generation(std::string_view raw, std::span<const std::string> stops) {
  std::size_t cut = raw.size();
  for (const auto& s : stops) {
    if (s.empty()) continue;
    cut = std::min(cut, raw.find(s));
  }
  cut = std::min({cut, raw.find('\n'), raw.find('\r')});
  return std::string(text::trim(raw.substr(0, cut)));
}

void CompletionClientConfig::validate() const {
  http::parse_url(endpoint);
  if (attempts < 1) throw Error(ErrorKind::kArgument, "attempts must be >= 1");
  if (max_concurrent_batches == 0) {
    throw Error(ErrorKind::kArgument, "max_concurrent_batches must be positive");
  }
  if (timeout.count() <= 0) throw Error(ErrorKind::kArgument, "timeout must be positive");
}

double TranslateRun::segments_per_second() const noexcept {
  return wall_seconds > 0.0 ? static_cast<double>(results.size()) / wall_seconds : 0.0;
}

CompletionClient::CompletionClient(CompletionClientConfig cfg)
    : cfg_(std::move(cfg)), trace_mu_(std::make_shared<std::mutex>()) {
  cfg_.validate();
  if (cfg_.trace_path) {
    // Truncate once; entries are appended per request.
    std::ofstream out(*cfg_.trace_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot write trace " + cfg_.trace_path->string());
  }
}

std::string CompletionClient::completions_url() const {
  const auto url = http::parse_url(cfg_.endpoint);
  if (url.path.ends_with("/completions")) return cfg_.endpoint;
  return http::join_path(cfg_.endpoint, "/v1/completions");
}

void CompletionClient::trace(const json& entry) const {
  if (!cfg_.trace_path) return;
  std::lock_guard lock(*trace_mu_);
  std::ofstream out(*cfg_.trace_path, std::ios::binary | std::ios::app);
  out << entry.dump() << '\n';
}

namespace {

std::vector<std::string> parse_choices(const std::string& body, std::size_t expected) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kContract, std::string("completion response is not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("choices") || !doc["choices"].is_array()) {
    throw Error(ErrorKind::kContract, "completion response has no \"choices\" array");
  }
  const auto& choices = doc["choices"];
  if (choices.size() != expected) {
    throw Error(ErrorKind::kContract, "completion response has " + std::to_string(choices.size()) +
                                          " choices, expected " + std::to_string(expected));
  }
  std::vector<std::string> texts(expected);
  std::vector<char> seen(expected, 0);
  for (std::size_t i = 0; i < choices.size(); ++i) {
    const auto& c = choices[i];
    if (!c.is_object() || !c.contains("text") || !c["text"].is_string()) {
      throw Error(ErrorKind::kContract, "choice " + std::to_string(i) + " has no text");
    }
    std::size_t slot = i;
    if (c.contains("index")) {
      if (!c["index"].is_number_integer() || c["index"].get<std::int64_t>() < 0) {
        throw Error(ErrorKind::kContract, "choice " + std::to_string(i) + " has a bad index");
      }
      slot = c["index"].get<std::size_t>();
    }
    if (slot >= expected || seen[slot]) {
      throw Error(ErrorKind::kContract, "choice index " + std::to_string(slot) +
                                            " out of range or repeated");
    }
    seen[slot] = 1;
    texts[slot] = c["text"].get<std::string>();
  }
  return texts;
}

}  // namespace

std::vector<TranslationResult> CompletionClient::translate_batch(
    const TranslationRequestBatch& batch) const {
  if (batch.ids.size() != batch.prompts.size()) {
    throw Error(ErrorKind::kArgument, "batch ids and prompts differ in length");
  }
  if (batch.prompts.empty()) return {};
  batch.params.validate();

  json body = {{"model", cfg_.model},
               {"prompt", json::array()},
               {"temperature", batch.params.wire_temperature()},
               {"top_p", batch.params.top_p},
               {"max_tokens", batch.params.max_tokens},
               {"stop", batch.params.stop_sequences}};
  for (const auto& p : batch.prompts) body["prompt"].push_back(p.text);
  const std::string payload = body.dump();
  const std::string url = completions_url();

  http::RequestOptions opts;
  opts.timeout = cfg_.timeout;
  opts.headers = http::auth_headers(cfg_.api_key_env);

  http::Response res;
  auto backoff = cfg_.initial_backoff;
  for (int attempt = 1; attempt <= cfg_.attempts; ++attempt) {
    const auto t0 = Clock::now();
    res = http::post_json(url, payload, opts);
    const auto latency =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
    trace({{"attempt", attempt},
           {"ids", batch.ids},
           {"request", body},
           {"status", res.status},
           {"response", res.status ? res.body : res.error},
           {"latency_ms", latency}});
    if (res.status == 200) {
      const auto texts = parse_choices(res.body, batch.size());
      std::vector<TranslationResult> out;
      out.reserve(texts.size());
      for (std::size_t i = 0; i < texts.size(); ++i) {
        out.push_back({batch.ids[i], postprocess_generation(texts[i], batch.params.stop_sequences),
                       latency});
      }
      return out;
    }
    log::warn("completion request failed (attempt ", attempt, "/", cfg_.attempts, "): ",
              res.status ? "HTTP " + std::to_string(res.status) : res.error);
    if (attempt < cfg_.attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  std::string id_list;
  for (std::size_t i = 0; i < batch.ids.size(); ++i) {
    if (i) id_list += ",";
    id_list += std::to_string(batch.ids[i]);
  }
  throw TransportError(ErrorKind::kTransport,
                       "completion request failed after " + std::to_string(cfg_.attempts) +
                           " attempts (" +
                           (res.status ? "HTTP " + std::to_string(res.status) : res.error) +
                           "); ids " + id_list,
                       batch.ids, res.status);
}

TranslateRun CompletionClient::translate_all(
    std::span<const TranslationRequestBatch> batches) const {
  std::vector<std::vector<TranslationResult>> per_batch(batches.size());
  const auto t0 = Clock::now();
  run_bounded(batches.size(), cfg_.max_concurrent_batches,
              [&](std::size_t b) { per_batch[b] = translate_batch(batches[b]); });
  TranslateRun run;
  run.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  for (std::size_t b = 0; b < batches.size(); ++b) {
    const std::int64_t latency = per_batch[b].empty() ? 0 : per_batch[b].front().latency_ms;
    run.timings.push_back({b, batches[b].size(), latency});
    for (auto& r : per_batch[b]) run.results.push_back(std::move(r));
  }
  return run;
}

std::vector<TranslationResult> translate_batch(const TranslationRequestBatch& batch,
                                               const std::string& endpoint) {
  CompletionClientConfig cfg;
  cfg.endpoint = endpoint;
  return CompletionClient(std::move(cfg)).translate_batch(batch);
}

// ---------------------------------------------------------------------------
// Mock server

const char* to_string(MockMode m) noexcept {
  switch (m) {
    case MockMode::kEchoFuzzy: return "echo-fuzzy";
    case MockMode::kDictionary: return "dictionary";
    case MockMode::kCanned: return "canned";
  }
  return "?";
}

MockMode parse_mock_mode(const std::string& name) {
  if (name == "echo-fuzzy") return MockMode::kEchoFuzzy;
  if (name == "dictionary") return MockMode::kDictionary;
  if (name == "canned") return MockMode::kCanned;
  throw Error(ErrorKind::kArgument, "unknown mock mode: " + name);
}

MockFixtures MockFixtures::from_json(const json& j) {
  MockFixtures fx;
  try {
    if (j.contains("lexicon")) fx.lexicon = j["lexicon"].get<std::map<std::string, std::string>>();
    if (j.contains("canned")) fx.canned = j["canned"].get<std::vector<std::string>>();
    if (j.contains("overgeneration")) fx.overgeneration = j["overgeneration"].get<std::string>();
    if (j.contains("source_name")) fx.langs.source_name = j["source_name"].get<std::string>();
    if (j.contains("target_name")) fx.langs.target_name = j["target_name"].get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation, std::string("bad mock fixtures: ") + e.what());
  }
  return fx;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view s) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (;;) {
    const auto nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(s.substr(start));
      return lines;
    }
    lines.push_back(s.substr(start, nl - start));
    start = nl + 1;
  }
}

}  // namespace

std::string mock_answer(MockMode mode, const MockFixtures& fx, std::string_view prompt,
                        std::size_t next_canned) {
  const auto lines = split_lines(prompt);
  switch (mode) {
    case MockMode::kEchoFuzzy: {
      // Last completed target line; the final line is the open stub.
      const std::string prefix = fx.langs.target_name + ": ";
      for (std::size_t i = lines.size(); i-- > 1;) {
        const auto line = lines[i - 1];
        if (line.starts_with(prefix)) return std::string(line.substr(prefix.size()));
      }
      return {};
    }
    case MockMode::kDictionary: {
      const std::string prefix = fx.langs.source_name + ": ";
      for (std::size_t i = lines.size(); i-- > 0;) {
        if (lines[i].starts_with(prefix)) {
          const auto it = fx.lexicon.find(std::string(lines[i].substr(prefix.size())));
          return it == fx.lexicon.end() ? std::string() : it->second;
        }
      }
      return {};
    }
    case MockMode::kCanned:
      if (next_canned >= fx.canned.size()) {
        throw Error(ErrorKind::kSize, "canned fixtures exhausted");
      }
      return fx.canned[next_canned];
  }
  return {};
}

struct MockServer::Impl {
  MockMode mode;
  MockFixtures fixtures;
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::mutex mu;
  std::size_t next_canned = 0;
  std::atomic<std::size_t> served{0};

  void handle(const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception&) {
      res.status = 400;
      res.set_content(R"({"error":"body is not JSON"})", "application/json");
      return;
    }
    std::vector<std::string> prompts;
    if (body.contains("prompt") && body["prompt"].is_string()) {
      prompts.push_back(body["prompt"].get<std::string>());
    } else if (body.contains("prompt") && body["prompt"].is_array()) {
      for (const auto& p : body["prompt"]) {
        if (!p.is_string()) {
          res.status = 400;
          return;
        }
        prompts.push_back(p.get<std::string>());
      }
    } else {
      res.status = 400;
      res.set_content(R"({"error":"missing prompt"})", "application/json");
      return;
    }

    json choices = json::array();
    {
      std::lock_guard lock(mu);
      if (mode == MockMode::kCanned && next_canned + prompts.size() > fixtures.canned.size()) {
        res.status = 400;
        res.set_content(R"({"error":"canned fixtures exhausted"})", "application/json");
        return;
      }
      for (std::size_t i = 0; i < prompts.size(); ++i) {
        const std::string answer = mock_answer(mode, fixtures, prompts[i], next_canned);
        if (mode == MockMode::kCanned) ++next_canned;
        choices.push_back({{"index", i},
                           {"text", " " + answer + fixtures.overgeneration},
                           {"finish_reason", "length"}});
      }
    }
    ++served;
    res.status = 200;
    res.set_content(json{{"object", "text_completion"}, {"choices", std::move(choices)}}.dump(),
                    "application/json");
  }
};

MockServer::MockServer(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}

std::unique_ptr<MockServer> MockServer::start(MockMode mode, MockFixtures fixtures, int port,
                                              const std::string& host) {
  auto impl = std::make_unique<Impl>();
  impl->mode = mode;
  impl->fixtures = std::move(fixtures);
  Impl* raw = impl.get();
  auto handler = [raw](const httplib::Request& req, httplib::Response& res) {
    raw->handle(req, res);
  };
  impl->server.Post("/v1/completions", handler);
  impl->server.Post("/completions", handler);

  if (port == 0) {
    impl->port = impl->server.bind_to_any_port(host);
    if (impl->port <= 0) throw Error(ErrorKind::kIo, "mock server could not bind on " + host);
  } else {
    if (!impl->server.bind_to_port(host, port)) {
      throw Error(ErrorKind::kIo, "mock server could not bind " + host + ":" + std::to_string(port));
    }
    impl->port = port;
  }
  impl->thread = std::thread([raw] { raw->server.listen_after_bind(); });
  impl->server.wait_until_ready();
  log::debug("mock server (", to_string(mode), ") on port ", impl->port);
  return std::unique_ptr<MockServer>(new MockServer(std::move(impl)));
}

MockServer::~MockServer() { stop(); }

void MockServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int MockServer::port() const noexcept { return impl_->port; }

std::string MockServer::url() const { return "http://127.0.0.1:" + std::to_string(impl_->port); }

std::size_t MockServer::requests_served() const noexcept { return impl_->served.load(); }

std::unique_ptr<MockServer> run_mock_server(MockMode mode, MockFixtures fixtures, int port) {
  return MockServer::start(mode, std::move(fixtures), port);
}

}  // namespace adaptmt
