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

#include "adaptmt/finetune_export.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "adaptmt/error.hpp"
#include "adaptmt/random.hpp"
#include "adaptmt/text.hpp"

namespace adaptmt {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(ShotType t) noexcept { return t == ShotType::kOne ? "one" : "zero"; }

ShotType parse_shot_type(const std::string& name) {
  if (name == "zero") return ShotType::kZero;
  if (name == "one") return ShotType::kOne;
  throw Error(ErrorKind::kValidation, "unknown shot_type: " + name);
}

void MixSpec::validate() const {
  if (!(one_shot_ratio >= 0.0 && one_shot_ratio <= 1.0)) {
    throw Error(ErrorKind::kArgument, "one_shot_ratio must be in [0, 1]");
  }
  if (validation_size >= total) {
    throw Error(ErrorKind::kArgument, "validation_size must be smaller than total");
  }
}

std::size_t MixSpec::one_shot_count() const {
  return static_cast<std::size_t>(std::llround(static_cast<double>(total) * one_shot_ratio));
}

FinetuneExample make_example(const SegmentPair& pair, const std::vector<FuzzyMatch>& matches,
                             const LanguageNames& langs) {
  FinetuneExample ex;
  if (matches.empty()) {
    ex.prompt = render_zero_shot(pair.source, langs).text;
    ex.shot_type = ShotType::kZero;
  } else {
    ex.prompt = render_few_shot(pair.source, matches, langs).text;
    ex.shot_type = ShotType::kOne;
  }
  ex.completion = " " + prompt_segment(pair.target) + "\n";
  return ex;
}

FinetuneDataset build_finetune_dataset(const ParallelCorpus& corpus, const ContextStore* store,
                                       const MixSpec& mix, const LanguageNames& langs) {
  mix.validate();
  if (corpus.size() < mix.total) {
    throw Error(ErrorKind::kSize, "corpus has " + std::to_string(corpus.size()) +
                                      " pairs, mix needs " + std::to_string(mix.total));
  }
  const std::size_t n_one = mix.one_shot_count();
  if (n_one > 0 && (store == nullptr || store->empty())) {
    throw Error(ErrorKind::kState, "one-shot examples requested but the context store is empty");
  }

  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng select_rng(mix.seed, /*stream=*/11);
  select_rng.shuffle(std::span<std::size_t>(order));
  order.resize(mix.total);

  // The first n_one selected pairs become one-shot examples.
  std::vector<std::vector<FuzzyMatch>> matches(mix.total);
  if (n_one > 0) {
    std::vector<std::string> queries;
    queries.reserve(n_one);
    for (std::size_t i = 0; i < n_one; ++i) queries.push_back(corpus.pairs[order[i]].source);
    auto retrieved = store->retrieve_batch(queries, 1);
    for (std::size_t i = 0; i < n_one; ++i) {
      if (retrieved[i].empty()) {
        throw Error(ErrorKind::kState, "no fuzzy match retrieved for pair " +
                                           std::to_string(corpus.pairs[order[i]].id));
      }
      matches[i] = std::move(retrieved[i]);
    }
  }

  std::vector<FinetuneExample> examples;
  examples.reserve(mix.total);
  for (std::size_t i = 0; i < mix.total; ++i) {
    examples.push_back(make_example(corpus.pairs[order[i]], matches[i], langs));
  }

  std::vector<std::size_t> positions(mix.total);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  Rng split_rng(mix.seed, /*stream=*/12);
  split_rng.shuffle(std::span<std::size_t>(positions));
  std::vector<char> in_validation(mix.total, 0);
  for (std::size_t i = 0; i < mix.validation_size; ++i) in_validation[positions[i]] = 1;

  FinetuneDataset out;
  out.train.reserve(mix.total - mix.validation_size);
  out.validation.reserve(mix.validation_size);
  for (std::size_t i = 0; i < mix.total; ++i) {
    (in_validation[i] ? out.validation : out.train).push_back(std::move(examples[i]));
  }
  return out;
}

std::size_t write_jsonl(const std::vector<FinetuneExample>& examples, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  for (const auto& ex : examples) {
    json obj = {{"schema_version", kFinetuneSchemaVersion},
                {"prompt", ex.prompt},
                {"completion", ex.completion},
                {"shot_type", to_string(ex.shot_type)}};
    out << obj.dump() << '\n';
  }
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
  return examples.size();
}

std::vector<FinetuneExample> read_jsonl(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::vector<FinetuneExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const auto obj = json::parse(line);
      out.push_back(FinetuneExample{obj.at("prompt").get<std::string>(),
                                    obj.at("completion").get<std::string>(),
                                    parse_shot_type(obj.at("shot_type").get<std::string>())});
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kValidation,
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void TrainingManifest::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kValidation, what); };
  if (quantization.quant_type != "nf4" && quantization.quant_type != "fp4") {
    fail("quantization.quant_type must be nf4 or fp4");
  }
  if (quantization.compute_dtype != "bfloat16" && quantization.compute_dtype != "float16" &&
      quantization.compute_dtype != "float32") {
    fail("quantization.compute_dtype must be bfloat16, float16 or float32");
  }
  if (lora.r <= 0) fail("lora.r must be positive");
  if (lora.alpha <= 0) fail("lora.alpha must be positive");
  if (!(lora.dropout >= 0.0 && lora.dropout <= 1.0)) fail("lora.dropout must be in [0, 1]");
  if (lora.bias != "none" && lora.bias != "all" && lora.bias != "lora_only") {
    fail("lora.bias must be none, all or lora_only");
  }
  if (training.epochs <= 0) fail("training.epochs must be positive");
  if (training.batch_size <= 0) fail("training.batch_size must be positive");
  if (!(training.warmup_ratio >= 0.0 && training.warmup_ratio <= 1.0)) {
    fail("training.warmup_ratio must be in [0, 1]");
  }
  if (!(training.learning_rate > 0.0) || !std::isfinite(training.learning_rate)) {
    fail("training.learning_rate must be positive");
  }
  if (training.lr_scheduler.empty()) fail("training.lr_scheduler must be set");
}

json TrainingManifest::to_json() const {
  json j = {
      {"schema_version", kFinetuneSchemaVersion},
      {"base_model", base_model},
      {"quantization",
       {{"load_in_4bit", quantization.load_in_4bit},
        {"quant_type", quantization.quant_type},
        {"double_quant", quantization.double_quant},
        {"compute_dtype", quantization.compute_dtype}}},
      {"lora",
       {{"r", lora.r}, {"alpha", lora.alpha}, {"dropout", lora.dropout}, {"bias", lora.bias}}},
      {"training",
       {{"epochs", training.epochs},
        {"batch_size", training.batch_size},
        {"warmup_ratio", training.warmup_ratio},
        {"learning_rate", training.learning_rate},
        {"lr_scheduler", training.lr_scheduler},
        {"bf16", training.bf16}}},
  };
  if (!train_file.empty() || !validation_file.empty()) {
    j["data"] = {{"train_file", train_file}, {"validation_file", validation_file}};
  }
  return j;
}

TrainingManifest TrainingManifest::from_json(const json& j) {
  TrainingManifest m;
  try {
    m.base_model = j.value("base_model", m.base_model);
    if (j.contains("quantization")) {
      const auto& q = j["quantization"];
      m.quantization.load_in_4bit = q.value("load_in_4bit", m.quantization.load_in_4bit);
      m.quantization.quant_type = q.value("quant_type", m.quantization.quant_type);
      m.quantization.double_quant = q.value("double_quant", m.quantization.double_quant);
      m.quantization.compute_dtype = q.value("compute_dtype", m.quantization.compute_dtype);
    }
    if (j.contains("lora")) {
      const auto& l = j["lora"];
      m.lora.r = l.value("r", m.lora.r);
      m.lora.alpha = l.value("alpha", m.lora.alpha);
      m.lora.dropout = l.value("dropout", m.lora.dropout);
      m.lora.bias = l.value("bias", m.lora.bias);
    }
    if (j.contains("training")) {
      const auto& t = j["training"];
      m.training.epochs = t.value("epochs", m.training.epochs);
      m.training.batch_size = t.value("batch_size", m.training.batch_size);
      m.training.warmup_ratio = t.value("warmup_ratio", m.training.warmup_ratio);
      m.training.learning_rate = t.value("learning_rate", m.training.learning_rate);
      m.training.lr_scheduler = t.value("lr_scheduler", m.training.lr_scheduler);
      m.training.bf16 = t.value("bf16", m.training.bf16);
    }
    if (j.contains("data")) {
      m.train_file = j["data"].value("train_file", std::string());
      m.validation_file = j["data"].value("validation_file", std::string());
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation, std::string("bad training manifest: ") + e.what());
  }
  return m;
}

void emit_training_manifest(const TrainingManifest& m, const fs::path& path) {
  m.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << m.to_json().dump(2) << '\n';
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

}  // namespace adaptmt
