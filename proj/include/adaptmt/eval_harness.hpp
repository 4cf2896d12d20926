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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "adaptmt/ann_index.hpp"
#include "adaptmt/embedding.hpp"
#include "adaptmt/llm_client.hpp"
#include "adaptmt/mt_metrics.hpp"
#include "adaptmt/prompting.hpp"
#include "json.hpp"

namespace adaptmt {

enum class Condition { kZeroShot, kOneShot };

const char* to_string(Condition c) noexcept;
Condition parse_condition(const std::string& name);

/// What to do when a test pair also occurs in the context corpus.
enum class LeakageMode { kError, kWarn, kOff };

const char* to_string(LeakageMode m) noexcept;
LeakageMode parse_leakage_mode(const std::string& name);

struct ExperimentConfig {
  std::string test_corpus;     // corpus spec: file or "src,tgt"
  std::string context_corpus;  // corpus spec; required for one-shot
  EmbeddingProviderConfig provider;
  IvfConfig ivf;
  CompletionClientConfig client;  // client.endpoint is the completion endpoint
  DecodingParams decoding;
  std::size_t batch_size = kDefaultBatchSize;
  std::size_t token_multiplier = kDefaultTokenMultiplier;
  std::vector<Condition> conditions{Condition::kZeroShot, Condition::kOneShot};
  std::filesystem::path output_dir = "run";
  std::uint64_t seed = 0;
  LanguageNames langs;
  LeakageMode leakage = LeakageMode::kError;
  std::string model_label;  // report "Model" column; defaults to client.model

  /// Throws kValidation on an empty condition list or missing paths.
  void validate() const;
  nlohmann::json to_json() const;
  /// Relative paths are resolved against base_dir. "seed" also seeds the
  /// provider and the index unless they set their own.
  static ExperimentConfig from_json(const nlohmann::json& j,
                                    const std::filesystem::path& base_dir = {});
  static ExperimentConfig load(const std::filesystem::path& path);
};

EmbeddingProviderConfig provider_config_from_json(const nlohmann::json& j,
                                                  EmbeddingProviderConfig base = {});
nlohmann::json provider_config_to_json(const EmbeddingProviderConfig& c);
IvfConfig ivf_config_from_json(const nlohmann::json& j, IvfConfig base = {});
nlohmann::json ivf_config_to_json(const IvfConfig& c);
DecodingParams decoding_from_json(const nlohmann::json& j, DecodingParams base = {});
nlohmann::json decoding_to_json(const DecodingParams& d);

struct ConditionResult {
  Condition condition = Condition::kZeroShot;
  std::string model;
  std::vector<TranslationResult> translations;
  std::vector<MetricScore> scores;  // BLEU, chrF++, TER
  double segments_per_second = 0.0;
};

/// Loads both corpora, checks leakage, builds the context store when a
/// one-shot condition is requested, then prompts, translates and scores each
/// condition (zero-shot first). Artifacts under cfg.output_dir:
/// retrieval.jsonl, prompts.<c>.jsonl, generations.<c>.jsonl,
/// report.{md,tsv,json}, run_meta.json. Errors are re-raised with a
/// "[stage]" prefix.
std::vector<ConditionResult> run_experiment(const ExperimentConfig& cfg);

/// Re-scores persisted generations (generations.<c>.jsonl) without touching
/// the endpoint, and rewrites the reports.
std::vector<ConditionResult> score_artifacts(const ExperimentConfig& cfg);

/// Test pair ids whose (source, target) also occurs in the context corpus.
std::vector<std::int64_t> find_leaked_ids(const ParallelCorpus& test,
                                          const ParallelCorpus& context);

enum class ReportFormat { kMarkdown, kTsv, kJson };

ReportFormat parse_report_format(const std::string& name);

/// Model / Context / BLEU ↑ / chrF++ ↑ / TER ↓, two decimals, zero-shot
/// rows first. Contains no timing so repeated runs render identically.
std::string render_report(std::span<const ConditionResult> results, ReportFormat format);

/// Inverse of the JSON report (scores only).
std::vector<ConditionResult> parse_report_json(const std::string& text);

/// FNV-1a 64 of the canonical config JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace adaptmt
