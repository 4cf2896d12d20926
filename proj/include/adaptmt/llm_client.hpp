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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adaptmt/prompting.hpp"
#include "json.hpp"

namespace adaptmt {

inline constexpr std::size_t kDefaultBatchSize = 20;
inline constexpr std::size_t kDefaultTokenMultiplier = 4;
inline constexpr double kDefaultTemperature = 0.3;
inline constexpr double kDefaultTopP = 1.0;

enum class DecodingMode { kGreedy, kSampled };

const char* to_string(DecodingMode m) noexcept;
DecodingMode parse_decoding_mode(const std::string& name);

struct DecodingParams {
  DecodingMode mode = DecodingMode::kSampled;
  double temperature = kDefaultTemperature;
  double top_p = kDefaultTopP;
  std::vector<std::string> stop_sequences{"\n"};
  std::size_t max_tokens = 0;  // filled per batch by make_batches

  void validate() const;
  /// Temperature actually sent: 0 in greedy mode.
  double wire_temperature() const noexcept;
};

struct TranslationRequestBatch {
  std::vector<std::int64_t> ids;
  std::vector<RenderedPrompt> prompts;
  std::vector<std::string> sources;
  DecodingParams params;

  std::size_t size() const noexcept { return prompts.size(); }
};

struct TranslationResult {
  std::int64_t id = 0;
  std::string text;
  std::int64_t latency_ms = 0;

  friend bool operator==(const TranslationResult&, const TranslationResult&) = default;
};

/// Order-preserving chunks of at most batch_size prompts. Each batch's
/// max_tokens is the largest whitespace word count among its sources times
/// token_multiplier (at least 1). Ids default to input positions.
std::vector<TranslationRequestBatch> make_batches(std::span<const RenderedPrompt> prompts,
                                                  std::span<const std::string> sources,
                                                  std::size_t batch_size = kDefaultBatchSize,
                                                  std::size_t token_multiplier = kDefaultTokenMultiplier,
                                                  const DecodingParams& params = {},
                                                  std::span<const std::int64_t> ids = {});

std::vector<TranslationRequestBatch> make_batches(const std::vector<PromptRecord>& records,
                                                  std::size_t batch_size = kDefaultBatchSize,
                                                  std::size_t token_multiplier = kDefaultTokenMultiplier,
                                                  const DecodingParams& params = {});

/// Cuts a raw generation at the earliest stop sequence (and any newline),
/// then trims surrounding whitespace.
std::string postprocess_generation(std::string_view raw, std::span<const std::string> stops);

struct CompletionClientConfig {
  std::string endpoint;  // base URL; "/v1/completions" is appended
  std::string model = "mistral-7b";
  std::chrono::milliseconds timeout{120'000};
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{1'000};
  std::size_t max_concurrent_batches = 2;
  std::string api_key_env = "ADAPTMT_API_KEY";
  std::optional<std::filesystem::path> trace_path;  // JSONL request/response log

  void validate() const;
};

struct BatchTiming {
  std::size_t batch = 0;
  std::size_t segments = 0;
  std::int64_t latency_ms = 0;
};

struct TranslateRun {
  std::vector<TranslationResult> results;  // input order
  std::vector<BatchTiming> timings;        // batch order
  double wall_seconds = 0.0;

  double segments_per_second() const noexcept;
};

/// Client for an OpenAI-compatible completions endpoint. Safe to share
/// across threads.
class CompletionClient {
 public:
  explicit CompletionClient(CompletionClientConfig cfg);

  /// One result per prompt in batch order. Retries non-200 responses and
  /// network failures; after the last attempt throws TransportError
  /// (kTransport) naming every id of the batch. A malformed 200 response
  /// throws kContract.
  std::vector<TranslationResult> translate_batch(const TranslationRequestBatch& batch) const;

  /// Runs up to max_concurrent_batches batches at once.
  TranslateRun translate_all(std::span<const TranslationRequestBatch> batches) const;

  const CompletionClientConfig& config() const noexcept { return cfg_; }
  std::string completions_url() const;

 private:
  void trace(const nlohmann::json& entry) const;

  CompletionClientConfig cfg_;
  std::shared_ptr<std::mutex> trace_mu_;
};

std::vector<TranslationResult> translate_batch(const TranslationRequestBatch& batch,
                                               const std::string& endpoint);

enum class MockMode { kEchoFuzzy, kDictionary, kCanned };

const char* to_string(MockMode m) noexcept;
MockMode parse_mock_mode(const std::string& name);

struct MockFixtures {
  std::map<std::string, std::string> lexicon;  // dictionary mode: source → target
  std::vector<std::string> canned;             // canned mode: outputs in request order
  LanguageNames langs;
  /// Appended after every answer so clients must honour the stop sequence.
  std::string overgeneration = "\nSpanish: <overgeneration>";

  static MockFixtures from_json(const nlohmann::json& j);
};

/// What the mock answers for one prompt (without overgeneration). Throws
/// kSize in canned mode when `next_canned` runs past the fixtures.
std::string mock_answer(MockMode mode, const MockFixtures& fx, std::string_view prompt,
                        std::size_t next_canned);

/// In-process completion server for offline tests. Stops on destruction.
class MockServer {
 public:
  /// port 0 picks a free port. Throws kIo when the port cannot be bound.
  static std::unique_ptr<MockServer> start(MockMode mode, MockFixtures fixtures, int port = 0,
                                           const std::string& host = "127.0.0.1");
  ~MockServer();
  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  int port() const noexcept;
  std::string url() const;
  std::size_t requests_served() const noexcept;
  void stop();

 private:
  struct Impl;
  explicit MockServer(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

std::unique_ptr<MockServer> run_mock_server(MockMode mode, MockFixtures fixtures, int port = 0);

}  // namespace adaptmt
