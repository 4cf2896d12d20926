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
#include <filesystem>
#include <string>
#include <vector>

#include "adaptmt/corpus.hpp"
#include "adaptmt/prompting.hpp"
#include "adaptmt/retrieval.hpp"
#include "json.hpp"

namespace adaptmt {

inline constexpr int kFinetuneSchemaVersion = 1;

enum class ShotType { kZero, kOne };

const char* to_string(ShotType t) noexcept;
ShotType parse_shot_type(const std::string& name);

/// Prompt and completion are kept apart so a trainer can restrict the loss
/// to the completion. completion == " " + target + "\n".
struct FinetuneExample {
  std::string prompt;
  std::string completion;
  ShotType shot_type = ShotType::kZero;

  friend bool operator==(const FinetuneExample&, const FinetuneExample&) = default;
};

struct MixSpec {
  std::size_t total = 20'000;
  double one_shot_ratio = 0.5;
  std::size_t validation_size = 1'000;
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t one_shot_count() const;
};

struct FinetuneDataset {
  std::vector<FinetuneExample> train;
  std::vector<FinetuneExample> validation;
};

/// Draws mix.total distinct pairs (seeded), turns round(total × ratio) of
/// them into one-shot examples with their top-1 fuzzy match from `store`
/// and the rest into zero-shot examples, then splits off validation_size
/// examples (seeded). `store` may be null when no one-shot examples are
/// requested.
FinetuneDataset build_finetune_dataset(const ParallelCorpus& corpus, const ContextStore* store,
                                       const MixSpec& mix, const LanguageNames& langs);

FinetuneExample make_example(const SegmentPair& pair, const std::vector<FuzzyMatch>& matches,
                             const LanguageNames& langs);

/// One JSON object per line; returns the number of lines written.
std::size_t write_jsonl(const std::vector<FinetuneExample>& examples,
                        const std::filesystem::path& path);
std::vector<FinetuneExample> read_jsonl(const std::filesystem::path& path);

struct QuantizationConfig {
  bool load_in_4bit = true;
  std::string quant_type = "nf4";
  bool double_quant = true;
  std::string compute_dtype = "bfloat16";
};

struct LoraConfig {
  int r = 64;
  int alpha = 16;
  double dropout = 0.1;
  std::string bias = "none";
};

struct TrainingConfig {
  int epochs = 1;
  int batch_size = 32;
  double warmup_ratio = 0.03;
  double learning_rate = 2e-3;
  std::string lr_scheduler = "constant";
  bool bf16 = true;
};

/// Hyperparameters handed to an external QLoRA trainer.
struct TrainingManifest {
  std::string base_model = "mistralai/Mistral-7B-v0.1";
  QuantizationConfig quantization;
  LoraConfig lora;
  TrainingConfig training;
  std::string train_file;
  std::string validation_file;

  /// Throws kValidation on non-positive counts or rates, or dropout/warmup
  /// outside [0, 1].
  void validate() const;
  nlohmann::json to_json() const;
  static TrainingManifest from_json(const nlohmann::json& j);
};

void emit_training_manifest(const TrainingManifest& m, const std::filesystem::path& path);

}  // namespace adaptmt
