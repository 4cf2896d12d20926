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

#include "adaptmt/eval_harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "adaptmt/corpus.hpp"
#include "adaptmt/error.hpp"
#include "adaptmt/log.hpp"
#include "adaptmt/retrieval.hpp"
#include "adaptmt/text.hpp"

namespace adaptmt {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(Condition c) noexcept {
  return c == Condition::kOneShot ? "one-shot" : "zero-shot";
}

Condition parse_condition(const std::string& name) {
  if (name == "zero-shot" || name == "zero") return Condition::kZeroShot;
  if (name == "one-shot" || name == "one") return Condition::kOneShot;
  throw Error(ErrorKind::kValidation, "unknown condition: " + name);
}

const char* to_string(LeakageMode m) noexcept {
  switch (m) {
    case LeakageMode::kError: return "error";
    case LeakageMode::kWarn: return "warn";
    case LeakageMode::kOff: return "off";
  }
  return "?";
}

LeakageMode parse_leakage_mode(const std::string& name) {
  if (name == "error") return LeakageMode::kError;
  if (name == "warn") return LeakageMode::kWarn;
  if (name == "off") return LeakageMode::kOff;
  throw Error(ErrorKind::kValidation, "unknown leakage mode: " + name);
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "markdown" || name == "md") return ReportFormat::kMarkdown;
  if (name == "tsv") return ReportFormat::kTsv;
  if (name == "json") return ReportFormat::kJson;
  throw Error(ErrorKind::kArgument, "unknown report format: " + name);
}

// ---------------------------------------------------------------------------
// Config (de)serialization

namespace {

const char* provider_kind_name(ProviderKind k) {
  return k == ProviderKind::kRemoteHttp ? "remote" : "deterministic";
}

ProviderKind parse_provider_kind(const std::string& name) {
  if (name == "remote" || name == "http") return ProviderKind::kRemoteHttp;
  if (name == "deterministic" || name == "test") return ProviderKind::kDeterministicTest;
  throw Error(ErrorKind::kValidation, "unknown provider kind: " + name);
}

std::string resolve_spec(const std::string& spec, const fs::path& base) {
  if (spec.empty() || spec == "-" || base.empty()) return spec;
  auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? p : (base / path).lexically_normal().string();
  };
  const auto comma = spec.find(',');
  if (comma == std::string::npos) return resolve(spec);
  return resolve(spec.substr(0, comma)) + "," + resolve(spec.substr(comma + 1));
}

std::string iso_utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

EmbeddingProviderConfig provider_config_from_json(const json& j, EmbeddingProviderConfig c) {
  if (j.contains("kind")) c.kind = parse_provider_kind(j["kind"].get<std::string>());
  c.endpoint = j.value("endpoint", c.endpoint);
  c.model_name = j.value("model", c.model_name);
  c.dim = j.value("dim", c.dim);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.normalize = j.value("normalize", c.normalize);
  c.seed = j.value("seed", c.seed);
  c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
  c.attempts = j.value("attempts", c.attempts);
  if (j.contains("initial_backoff_ms")) {
    c.initial_backoff = std::chrono::milliseconds(j["initial_backoff_ms"].get<std::int64_t>());
  }
  if (j.contains("timeout_ms")) {
    c.timeout = std::chrono::milliseconds(j["timeout_ms"].get<std::int64_t>());
  }
  c.api_key_env = j.value("api_key_env", c.api_key_env);
  return c;
}

json provider_config_to_json(const EmbeddingProviderConfig& c) {
  return {{"kind", provider_kind_name(c.kind)},
          {"endpoint", c.endpoint},
          {"model", c.model_name},
          {"dim", c.dim},
          {"batch_size", c.batch_size},
          {"normalize", c.normalize},
          {"seed", c.seed},
          {"max_in_flight", c.max_in_flight},
          {"attempts", c.attempts},
          {"initial_backoff_ms", c.initial_backoff.count()},
          {"timeout_ms", c.timeout.count()},
          {"api_key_env", c.api_key_env}};
}

IvfConfig ivf_config_from_json(const json& j, IvfConfig c) {
  c.dim = j.value("dim", c.dim);
  c.nlist = j.value("nlist", c.nlist);
  c.nprobe = j.value("nprobe", c.nprobe);
  if (j.contains("metric")) c.metric = parse_metric(j["metric"].get<std::string>().c_str());
  c.kmeans_iters = j.value("kmeans_iters", c.kmeans_iters);
  c.seed = j.value("seed", c.seed);
  if (j.contains("backend")) {
    const auto b = j["backend"].get<std::string>();
    if (b == "serial") {
      c.backend = kernels::Backend::kSerial;
    } else if (b == "openmp") {
      c.backend = kernels::Backend::kOpenMP;
    } else {
      throw Error(ErrorKind::kValidation, "unknown backend: " + b);
    }
  }
  return c;
}

json ivf_config_to_json(const IvfConfig& c) {
  return {{"dim", c.dim},
          {"nlist", c.nlist},
          {"nprobe", c.nprobe},
          {"metric", to_string(c.metric)},
          {"kmeans_iters", c.kmeans_iters},
          {"seed", c.seed},
          {"backend", c.backend == kernels::Backend::kSerial ? "serial" : "openmp"}};
}

DecodingParams decoding_from_json(const json& j, DecodingParams d) {
  if (j.contains("mode")) d.mode = parse_decoding_mode(j["mode"].get<std::string>());
  d.temperature = j.value("temperature", d.temperature);
  d.top_p = j.value("top_p", d.top_p);
  if (j.contains("stop")) d.stop_sequences = j["stop"].get<std::vector<std::string>>();
  return d;
}

json decoding_to_json(const DecodingParams& d) {
  return {{"mode", to_string(d.mode)},
          {"temperature", d.temperature},
          {"top_p", d.top_p},
          {"stop", d.stop_sequences}};
}

void ExperimentConfig::validate() const {
  if (conditions.empty()) throw Error(ErrorKind::kValidation, "conditions must be non-empty");
  if (test_corpus.empty()) throw Error(ErrorKind::kValidation, "test_corpus is not set");
  const bool one_shot =
      std::find(conditions.begin(), conditions.end(), Condition::kOneShot) != conditions.end();
  if (one_shot && context_corpus.empty()) {
    throw Error(ErrorKind::kValidation, "one-shot condition needs context_corpus");
  }
  if (client.endpoint.empty()) throw Error(ErrorKind::kValidation, "endpoint is not set");
  if (output_dir.empty()) throw Error(ErrorKind::kValidation, "output_dir is not set");
  langs.validate();
  decoding.validate();
}

json ExperimentConfig::to_json() const {
  json conds = json::array();
  for (auto c : conditions) conds.push_back(to_string(c));
  return {{"test_corpus", test_corpus},
          {"context_corpus", context_corpus},
          {"provider", provider_config_to_json(provider)},
          {"ivf", ivf_config_to_json(ivf)},
          {"endpoint", client.endpoint},
          {"model", client.model},
          {"attempts", client.attempts},
          {"initial_backoff_ms", client.initial_backoff.count()},
          {"timeout_ms", client.timeout.count()},
          {"max_concurrent_batches", client.max_concurrent_batches},
          {"decoding", decoding_to_json(decoding)},
          {"batch_size", batch_size},
          {"token_multiplier", token_multiplier},
          {"conditions", std::move(conds)},
          {"output_dir", output_dir.string()},
          {"seed", seed},
          {"languages",
           {{"source_name", langs.source_name},
            {"target_name", langs.target_name},
            {"source_code", langs.source_code},
            {"target_code", langs.target_code}}},
          {"leakage", to_string(leakage)},
          {"model_label", model_label}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j, const fs::path& base_dir) {
  ExperimentConfig cfg;
  try {
    if (!j.is_object()) throw Error(ErrorKind::kValidation, "experiment config must be an object");
    cfg.seed = j.value("seed", cfg.seed);
    cfg.provider.seed = cfg.seed;
    cfg.ivf.seed = cfg.seed;
    cfg.test_corpus = resolve_spec(j.value("test_corpus", std::string()), base_dir);
    cfg.context_corpus = resolve_spec(j.value("context_corpus", std::string()), base_dir);
    if (j.contains("dim")) cfg.provider.dim = j["dim"].get<std::size_t>();
    if (j.contains("provider")) cfg.provider = provider_config_from_json(j["provider"], cfg.provider);
    // The index dimension follows the provider unless set explicitly.
    cfg.ivf.dim = cfg.provider.dim;
    if (j.contains("ivf")) cfg.ivf = ivf_config_from_json(j["ivf"], cfg.ivf);
    cfg.client.endpoint = j.value("endpoint", cfg.client.endpoint);
    if (const char* env = std::getenv("ADAPTMT_ENDPOINT"); env && *env) {
      cfg.client.endpoint = env;
    }
    cfg.client.model = j.value("model", cfg.client.model);
    cfg.client.attempts = j.value("attempts", cfg.client.attempts);
    if (j.contains("initial_backoff_ms")) {
      cfg.client.initial_backoff =
          std::chrono::milliseconds(j["initial_backoff_ms"].get<std::int64_t>());
    }
    if (j.contains("timeout_ms")) {
      cfg.client.timeout = std::chrono::milliseconds(j["timeout_ms"].get<std::int64_t>());
    }
    cfg.client.max_concurrent_batches =
        j.value("max_concurrent_batches", cfg.client.max_concurrent_batches);
    if (j.contains("decoding")) cfg.decoding = decoding_from_json(j["decoding"], cfg.decoding);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.token_multiplier = j.value("token_multiplier", cfg.token_multiplier);
    if (j.contains("conditions")) {
      cfg.conditions.clear();
      for (const auto& c : j["conditions"]) cfg.conditions.push_back(parse_condition(c.get<std::string>()));
    }
    if (j.contains("output_dir")) {
      const fs::path out = j["output_dir"].get<std::string>();
      cfg.output_dir = out.is_absolute() || base_dir.empty() ? out : base_dir / out;
    }
    if (j.contains("languages")) {
      const auto& l = j["languages"];
      cfg.langs.source_name = l.value("source_name", cfg.langs.source_name);
      cfg.langs.target_name = l.value("target_name", cfg.langs.target_name);
      cfg.langs.source_code = l.value("source_code", cfg.langs.source_code);
      cfg.langs.target_code = l.value("target_code", cfg.langs.target_code);
    }
    if (j.contains("leakage")) cfg.leakage = parse_leakage_mode(j["leakage"].get<std::string>());
    cfg.model_label = j.value("model_label", cfg.model_label);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation, std::string("bad experiment config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation, path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

std::string config_hash(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(text_hash(cfg.to_json().dump())));
  return buf;
}

// ---------------------------------------------------------------------------
// Experiment

namespace {

template <typename Fn>
auto run_stage(const char* name, Fn&& fn) -> decltype(fn()) {
  const std::string label = std::string("[") + name + "] ";
  try {
    return fn();
  } catch (const TransportError& e) {
    throw TransportError(e.kind(), label + e.what(), e.failed_ids(), e.http_status());
  } catch (const Error& e) {
    throw Error(e.kind(), label + e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation, label + e.what());
  }
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  return out;
}

fs::path generations_path(const fs::path& dir, Condition c) {
  return dir / (std::string("generations.") + to_string(c) + ".jsonl");
}

fs::path prompts_path(const fs::path& dir, Condition c) {
  return dir / (std::string("prompts.") + to_string(c) + ".jsonl");
}

std::vector<Condition> ordered_conditions(const std::vector<Condition>& in) {
  std::vector<Condition> out;
  for (auto c : {Condition::kZeroShot, Condition::kOneShot}) {
    if (std::find(in.begin(), in.end(), c) != in.end()) out.push_back(c);
  }
  return out;
}

std::vector<MetricScore> score_translations(const std::vector<TranslationResult>& translations,
                                            const std::vector<std::string>& references) {
  std::vector<EvalPair> pairs;
  pairs.reserve(translations.size());
  for (std::size_t i = 0; i < translations.size(); ++i) {
    pairs.push_back({translations[i].text, references[i]});
  }
  return score_all(pairs);
}

void write_generations(const fs::path& path, const std::vector<TranslationResult>& results,
                       const std::vector<std::string>& references) {
  auto out = open_output(path);
  for (std::size_t i = 0; i < results.size(); ++i) {
    out << json{{"id", results[i].id},
                {"text", results[i].text},
                {"reference", references[i]},
                {"latency_ms", results[i].latency_ms}}
               .dump()
        << '\n';
  }
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

void write_reports(const fs::path& dir, std::span<const ConditionResult> results) {
  const std::pair<const char*, ReportFormat> outputs[] = {{"report.md", ReportFormat::kMarkdown},
                                                          {"report.tsv", ReportFormat::kTsv},
                                                          {"report.json", ReportFormat::kJson}};
  for (const auto& [name, format] : outputs) {
    auto out = open_output(dir / name);
    out << render_report(results, format);
    if (!out) throw Error(ErrorKind::kIo, std::string("write failed: ") + name);
  }
}

}  // namespace

std::vector<std::int64_t> find_leaked_ids(const ParallelCorpus& test,
                                          const ParallelCorpus& context) {
  std::set<std::pair<std::string_view, std::string_view>> pool;
  for (const auto& p : context.pairs) pool.emplace(p.source, p.target);
  std::vector<std::int64_t> leaked;
  for (const auto& p : test.pairs) {
    if (pool.count({p.source, p.target})) leaked.push_back(p.id);
  }
  return leaked;
}

std::vector<ConditionResult> run_experiment(const ExperimentConfig& cfg) {
  run_stage("config", [&] { cfg.validate(); });
  const std::string started_at = iso_utc_now();
  const auto conditions = ordered_conditions(cfg.conditions);
  const bool one_shot =
      std::find(conditions.begin(), conditions.end(), Condition::kOneShot) != conditions.end();

  run_stage("setup", [&] {
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw Error(ErrorKind::kIo, "cannot create " + cfg.output_dir.string() + ": " + ec.message());
  });

  const ParallelCorpus test = run_stage("load-test", [&] {
    auto c = load_corpus_spec(cfg.test_corpus);
    if (c.empty()) throw Error(ErrorKind::kSize, "test corpus is empty");
    check_unique_ids(c);
    return c;
  });
  ParallelCorpus context;
  if (!cfg.context_corpus.empty()) {
    context = run_stage("load-context", [&] { return load_corpus_spec(cfg.context_corpus); });
  }

  run_stage("leakage", [&] {
    if (cfg.leakage == LeakageMode::kOff || context.empty()) return;
    const auto leaked = find_leaked_ids(test, context);
    if (leaked.empty()) return;
    std::string ids;
    for (std::size_t i = 0; i < leaked.size(); ++i) {
      if (i) ids += ",";
      ids += std::to_string(leaked[i]);
    }
    const std::string msg = std::to_string(leaked.size()) +
                            " test pair(s) also occur in the context corpus: ids " + ids;
    if (cfg.leakage == LeakageMode::kError) throw Error(ErrorKind::kValidation, msg);
    log::warn(msg);
  });

  std::vector<std::string> sources, references;
  sources.reserve(test.size());
  references.reserve(test.size());
  for (const auto& p : test.pairs) {
    sources.push_back(p.source);
    references.push_back(p.target);
  }

  std::vector<std::vector<FuzzyMatch>> matches;
  if (one_shot) {
    matches = run_stage("retrieve", [&] {
      const auto store = ContextStore::build(context, cfg.provider, cfg.ivf);
      auto found = store.retrieve_batch(sources, 1);
      std::vector<RetrievalRecord> records;
      records.reserve(found.size());
      for (std::size_t i = 0; i < found.size(); ++i) {
        records.push_back({test.pairs[i].id, found[i]});
      }
      auto out = open_output(cfg.output_dir / "retrieval.jsonl");
      write_retrieval_dump(out, records);
      return found;
    });
  }

  CompletionClientConfig client_cfg = cfg.client;
  const CompletionClient client = run_stage("translate", [&] { return CompletionClient(client_cfg); });
  const std::string model = cfg.model_label.empty() ? cfg.client.model : cfg.model_label;

  std::vector<ConditionResult> results;
  json meta_conditions = json::array();
  for (const Condition cond : conditions) {
    const auto records = run_stage("prompts", [&] {
      std::vector<PromptRecord> recs;
      recs.reserve(test.size());
      for (std::size_t i = 0; i < test.size(); ++i) {
        PromptRecord r;
        r.id = test.pairs[i].id;
        r.source = sources[i];
        r.reference = references[i];
        if (cond == Condition::kOneShot) {
          if (matches[i].empty()) {
            throw Error(ErrorKind::kState, "no fuzzy match for test pair " + std::to_string(r.id));
          }
          r.prompt = render_few_shot(sources[i], matches[i], cfg.langs);
        } else {
          r.prompt = render_zero_shot(sources[i], cfg.langs);
        }
        recs.push_back(std::move(r));
      }
      auto out = open_output(prompts_path(cfg.output_dir, cond));
      write_prompt_dump(out, recs);
      return recs;
    });

    const TranslateRun run = run_stage("translate", [&] {
      const auto batches = make_batches(records, cfg.batch_size, cfg.token_multiplier, cfg.decoding);
      auto r = client.translate_all(batches);
      write_generations(generations_path(cfg.output_dir, cond), r.results, references);
      return r;
    });

    ConditionResult res;
    res.condition = cond;
    res.model = model;
    res.translations = run.results;
    res.segments_per_second = run.segments_per_second();
    res.scores = run_stage("score", [&] { return score_translations(run.results, references); });
    log::info(to_string(cond), ": ", res.translations.size(), " segments, ",
              res.segments_per_second, " segments/s");
    meta_conditions.push_back({{"condition", to_string(cond)},
                               {"segments", res.translations.size()},
                               {"wall_seconds", run.wall_seconds},
                               {"segments_per_second", res.segments_per_second}});
    results.push_back(std::move(res));
  }

  run_stage("report", [&] {
    write_reports(cfg.output_dir, results);
    json meta = {{"schema_version", 1},
                 {"config_hash", config_hash(cfg)},
                 {"seed", cfg.seed},
                 {"started_at", started_at},
                 {"finished_at", iso_utc_now()},
                 {"conditions", meta_conditions},
                 {"config", cfg.to_json()}};
    auto out = open_output(cfg.output_dir / "run_meta.json");
    out << meta.dump(2) << '\n';
  });
  return results;
}

std::vector<ConditionResult> score_artifacts(const ExperimentConfig& cfg) {
  if (cfg.conditions.empty()) throw Error(ErrorKind::kValidation, "conditions must be non-empty");
  const std::string model = cfg.model_label.empty() ? cfg.client.model : cfg.model_label;
  std::vector<ConditionResult> results;
  for (const Condition cond : ordered_conditions(cfg.conditions)) {
    ConditionResult res = run_stage("score", [&] {
      const auto path = generations_path(cfg.output_dir, cond);
      std::ifstream in(path, std::ios::binary);
      if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
      ConditionResult r;
      r.condition = cond;
      r.model = model;
      std::vector<std::string> references;
      std::string line;
      while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        const auto obj = json::parse(line);
        r.translations.push_back({obj.at("id").get<std::int64_t>(), obj.at("text").get<std::string>(),
                                  obj.value("latency_ms", std::int64_t{0})});
        references.push_back(obj.at("reference").get<std::string>());
      }
      r.scores = score_translations(r.translations, references);
      return r;
    });
    results.push_back(std::move(res));
  }
  run_stage("report", [&] { write_reports(cfg.output_dir, results); });
  return results;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

constexpr const char* kColumns[] = {"Model", "Context", "BLEU ↑", "chrF++ ↑", "TER ↓"};

double score_of(const ConditionResult& r, const char* name) {
  for (const auto& s : r.scores) {
    if (s.name == name) return s.value;
  }
  throw Error(ErrorKind::kArgument, std::string("result has no ") + name + " score");
}

std::vector<const ConditionResult*> report_rows(std::span<const ConditionResult> results) {
  std::vector<const ConditionResult*> rows;
  for (const auto& r : results) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
    return static_cast<int>(a->condition) < static_cast<int>(b->condition);
  });
  return rows;
}

}  // namespace

std::string render_report(std::span<const ConditionResult> results, ReportFormat format) {
  const auto rows = report_rows(results);
  std::ostringstream os;
  switch (format) {
    case ReportFormat::kMarkdown: {
      os << "|";
      for (const char* c : kColumns) os << ' ' << c << " |";
      os << "\n|---|---|---:|---:|---:|\n";
      for (const auto* r : rows) {
        os << "| " << r->model << " | " << to_string(r->condition) << " | "
           << format_score(score_of(*r, "BLEU")) << " | " << format_score(score_of(*r, "chrF++"))
           << " | " << format_score(score_of(*r, "TER")) << " |\n";
      }
      break;
    }
    case ReportFormat::kTsv: {
      for (std::size_t i = 0; i < std::size(kColumns); ++i) os << (i ? "\t" : "") << kColumns[i];
      os << '\n';
      for (const auto* r : rows) {
        os << r->model << '\t' << to_string(r->condition) << '\t'
           << format_score(score_of(*r, "BLEU")) << '\t' << format_score(score_of(*r, "chrF++"))
           << '\t' << format_score(score_of(*r, "TER")) << '\n';
      }
      break;
    }
    case ReportFormat::kJson: {
      json j = {{"schema_version", 1}, {"columns", kColumns}, {"rows", json::array()}};
      for (const auto* r : rows) {
        j["rows"].push_back({{"model", r->model},
                             {"context", to_string(r->condition)},
                             {"bleu", score_of(*r, "BLEU")},
                             {"chrf_pp", score_of(*r, "chrF++")},
                             {"ter", score_of(*r, "TER")}});
      }
      os << j.dump(2) << '\n';
      break;
    }
  }
  return os.str();
}

std::vector<ConditionResult> parse_report_json(const std::string& text_in) {
  std::vector<ConditionResult> out;
  try {
    const auto j = json::parse(text_in);
    for (const auto& row : j.at("rows")) {
      ConditionResult r;
      r.condition = parse_condition(row.at("context").get<std::string>());
      r.model = row.at("model").get<std::string>();
      r.scores = {{"BLEU", row.at("bleu").get<double>(), Direction::kHigherBetter},
                  {"chrF++", row.at("chrf_pp").get<double>(), Direction::kHigherBetter},
                  {"TER", row.at("ter").get<double>(), Direction::kLowerBetter}};
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation, std::string("bad report JSON: ") + e.what());
  }
  return out;
}

}  // namespace adaptmt
