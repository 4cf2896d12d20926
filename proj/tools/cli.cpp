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

#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "adaptmt/ann_index.hpp"
#include "adaptmt/corpus.hpp"
#include "adaptmt/embedding.hpp"
#include "adaptmt/error.hpp"
#include "adaptmt/eval_harness.hpp"
#include "adaptmt/finetune_export.hpp"
#include "adaptmt/llm_client.hpp"
#include "adaptmt/log.hpp"
#include "adaptmt/mt_metrics.hpp"
#include "adaptmt/prompting.hpp"
#include "adaptmt/retrieval.hpp"
#include "adaptmt/text.hpp"
#include "json.hpp"

namespace adaptmt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return kUsageError;
    case ErrorKind::kTransport:
    case ErrorKind::kProvider: return kTransportError;
    default: return kDataError;
  }
}

[[noreturn]] void usage_error(const std::string& msg) { throw Error(ErrorKind::kUsage, msg); }

// Options shared by every subcommand.
struct Common {
  std::uint64_t seed = 0;
  std::string config;
  std::string output;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Seed for every random draw")->capture_default_str();
  sub->add_option("--config", c.config, "JSON file; keys supply defaults for flags");
  sub->add_option("-o,--output,--out", c.output, "Output path (stdout when omitted)");
}

struct ProviderOpts {
  std::string kind = "deterministic";
  std::string endpoint;
  std::string model = kDefaultEmbeddingModel;
  std::size_t dim = kDefaultEmbeddingDim;
  std::size_t batch_size = 64;
};

void add_provider(CLI::App* sub, ProviderOpts& p) {
  sub->add_option("--provider", p.kind, "Embedding provider: deterministic|remote")
      ->capture_default_str();
  sub->add_option("--embed-endpoint", p.endpoint, "Embedding endpoint URL (remote provider)");
  sub->add_option("--embed-model", p.model, "Embedding model name")->capture_default_str();
  sub->add_option("--dim", p.dim, "Embedding dimension")->capture_default_str();
  sub->add_option("--embed-batch-size", p.batch_size, "Texts per embedding request")
      ->capture_default_str();
}

EmbeddingProviderConfig provider_config(const ProviderOpts& p, std::uint64_t seed) {
  EmbeddingProviderConfig c;
  if (p.kind == "remote") {
    c.kind = ProviderKind::kRemoteHttp;
  } else if (p.kind == "deterministic") {
    c.kind = ProviderKind::kDeterministicTest;
  } else {
    usage_error("unknown --provider: " + p.kind);
  }
  c.endpoint = p.endpoint;
  c.model_name = p.model;
  c.dim = p.dim;
  c.batch_size = p.batch_size;
  c.seed = seed;
  return c;
}

struct IvfOpts {
  std::size_t nlist = kDefaultNlist;
  std::size_t nprobe = kDefaultNprobe;
  std::string metric = "cosine";
  std::size_t kmeans_iters = 25;
  std::string backend = "openmp";
};

void add_ivf(CLI::App* sub, IvfOpts& o) {
  sub->add_option("--nlist", o.nlist, "Number of k-means clusters")->capture_default_str();
  sub->add_option("--nprobe", o.nprobe, "Clusters scanned per query")->capture_default_str();
  sub->add_option("--metric", o.metric, "cosine|l2")->capture_default_str();
  sub->add_option("--kmeans-iters", o.kmeans_iters, "Lloyd iterations")->capture_default_str();
  sub->add_option("--backend", o.backend, "openmp|serial")->capture_default_str();
}

IvfConfig ivf_config(const IvfOpts& o, std::size_t dim, std::uint64_t seed) {
  IvfConfig c;
  c.dim = dim;
  c.nlist = o.nlist;
  c.nprobe = o.nprobe;
  c.metric = parse_metric(o.metric.c_str());
  c.kmeans_iters = o.kmeans_iters;
  c.seed = seed;
  if (o.backend == "serial") {
    c.backend = kernels::Backend::kSerial;
  } else if (o.backend == "openmp") {
    c.backend = kernels::Backend::kOpenMP;
  } else {
    usage_error("unknown --backend: " + o.backend);
  }
  return c;
}

struct LangOpts {
  LanguageNames names;
};

void add_langs(CLI::App* sub, LangOpts& l) {
  sub->add_option("--source-name", l.names.source_name, "Source language name in prompts")
      ->capture_default_str();
  sub->add_option("--target-name", l.names.target_name, "Target language name in prompts")
      ->capture_default_str();
}

// Writes to the --output path, or to `out` when none was given.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw Error(ErrorKind::kIo, "cannot write " + path);
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw Error(ErrorKind::kIo, "write failed");
  }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

std::vector<std::string> read_text_lines(const std::string& path) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (path != "-") {
    file.open(path, std::ios::binary);
    if (!file) throw Error(ErrorKind::kIo, "cannot open " + path);
    in = &file;
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(*in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

template <typename Fn>
auto with_input(const std::string& path, Fn&& fn) {
  if (path == "-") return fn(std::cin);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  return fn(in);
}

bool is_embedding_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in && std::string(magic, 4) == "EMB1";
}

std::vector<float> embed_rows(const std::vector<std::string>& texts,
                              const EmbeddingProviderConfig& cfg) {
  std::vector<float> rows;
  if (texts.empty()) return rows;
  for (const auto& v : make_provider(cfg)->embed(texts)) {
    rows.insert(rows.end(), v.values.begin(), v.values.end());
  }
  return rows;
}

// Turns a flat JSON object into "--key value" arguments for keys the user
// did not pass explicitly.
std::vector<std::string> config_args(const std::string& path,
                                     const std::vector<std::string>& given) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kValidation, path + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::kValidation, path + ": config must be an object");
  std::vector<std::string> extra;
  for (const auto& [key, value] : j.items()) {
    const std::string flag = "--" + key;
    bool present = false;
    for (const auto& a : given) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
    }
    if (present || key == "config") continue;
    auto scalar = [](const json& v) {
      return v.is_string() ? v.get<std::string>() : v.dump();
    };
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& v : value) {
        extra.push_back(flag);
        extra.push_back(scalar(v));
      }
    } else if (!value.is_null()) {
      extra.push_back(flag);
      extra.push_back(scalar(value));
    }
  }
  return extra;
}

void print_json(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

}  // namespace

int dispatch(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Retrieval-augmented MT pipeline: corpora, fuzzy matches, prompts, metrics.",
               "adaptmt"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // ---- filter
  Common filter_c;
  std::string filter_in;
  std::size_t max_words = kDefaultMaxWords;
  std::string filter_format = "tsv";
  auto* filter = app.add_subcommand("filter", "Drop duplicates, empty sides and long pairs");
  add_common(filter, filter_c);
  filter->add_option("--in", filter_in, "Corpus: src.txt,tgt.txt | file.tsv | file.jsonl | -")
      ->required();
  filter->add_option("--max-words", max_words, "Maximum words per side")->capture_default_str();
  filter->add_option("--format", filter_format, "Stdout format: tsv|jsonl")->capture_default_str();

  // ---- split
  Common split_c;
  std::string split_in, train_out, validation_out;
  std::size_t split_validation = 1000;
  auto* split = app.add_subcommand("split", "Seeded train/validation split");
  add_common(split, split_c);
  split->add_option("--in", split_in, "Corpus spec")->required();
  split->add_option("--validation-size", split_validation, "Validation pairs")
      ->capture_default_str();
  split->add_option("--train-out", train_out, "Train corpus path");
  split->add_option("--validation-out", validation_out, "Validation corpus path");

  // ---- embed
  Common embed_c;
  ProviderOpts embed_p;
  std::string embed_in, embed_side = "source";
  auto* embed = app.add_subcommand("embed", "Embed one side of a corpus into a vector cache");
  add_common(embed, embed_c);
  add_provider(embed, embed_p);
  embed->add_option("--in", embed_in, "Corpus spec")->required();
  embed->add_option("--side", embed_side, "source|target")->capture_default_str();

  // ---- index-build
  Common ib_c;
  ProviderOpts ib_p;
  IvfOpts ib_ivf;
  std::string ib_in;
  auto* index_build = app.add_subcommand("index-build", "Train and fill an IVF-flat index");
  add_common(index_build, ib_c);
  add_provider(index_build, ib_p);
  add_ivf(index_build, ib_ivf);
  index_build->add_option("--in", ib_in, "Embedding cache, or corpus spec to embed sources")
      ->required();

  // ---- index-search
  Common is_c;
  ProviderOpts is_p;
  std::string is_index, is_in;
  std::vector<std::string> is_queries;
  std::size_t is_k = 10;
  std::optional<std::size_t> is_nprobe;
  auto* index_search = app.add_subcommand("index-search", "Query a saved index");
  add_common(index_search, is_c);
  add_provider(index_search, is_p);
  index_search->add_option("--index", is_index, "Index file")->required();
  index_search->add_option("--query", is_queries, "Query text (repeatable)");
  index_search->add_option("--in", is_in, "File with one query per line, or -");
  index_search->add_option("--k", is_k, "Hits per query")->capture_default_str();
  index_search->add_option("--nprobe", is_nprobe, "Override the saved nprobe");

  // ---- retrieve
  Common rt_c;
  ProviderOpts rt_p;
  IvfOpts rt_ivf;
  std::string rt_in, rt_context;
  std::size_t rt_k = 1;
  bool rt_check_leakage = false;
  auto* retrieve = app.add_subcommand("retrieve", "Fuzzy matches for each test source");
  add_common(retrieve, rt_c);
  add_provider(retrieve, rt_p);
  add_ivf(retrieve, rt_ivf);
  retrieve->add_option("--in", rt_in, "Test corpus spec")->required();
  retrieve->add_option("--context", rt_context, "Context corpus spec")->required();
  retrieve->add_option("--k", rt_k, "Matches per query")->capture_default_str();
  retrieve->add_flag("--check-leakage", rt_check_leakage,
                     "Fail when a test pair also occurs in the context corpus");

  // ---- prompts
  Common pr_c;
  LangOpts pr_l;
  std::string pr_in, pr_retrieval, pr_condition;
  auto* prompts = app.add_subcommand("prompts", "Render zero-shot or one-shot prompts");
  add_common(prompts, pr_c);
  add_langs(prompts, pr_l);
  prompts->add_option("--in", pr_in, "Test corpus spec")->required();
  prompts->add_option("--retrieval", pr_retrieval, "Retrieval dump (enables one-shot)");
  prompts->add_option("--condition", pr_condition, "zero-shot|one-shot");

  // ---- export-dataset
  Common ex_c;
  ProviderOpts ex_p;
  IvfOpts ex_ivf;
  LangOpts ex_l;
  std::string ex_in, ex_context, ex_train_out, ex_validation_out;
  MixSpec ex_mix;
  auto* export_ds = app.add_subcommand("export-dataset", "Build the fine-tuning JSONL files");
  add_common(export_ds, ex_c);
  add_provider(export_ds, ex_p);
  add_ivf(export_ds, ex_ivf);
  add_langs(export_ds, ex_l);
  export_ds->add_option("--in", ex_in, "Corpus to draw examples from")->required();
  export_ds->add_option("--context", ex_context, "Training context corpus spec");
  export_ds->add_option("--total", ex_mix.total, "Examples drawn")->capture_default_str();
  export_ds->add_option("--one-shot-ratio", ex_mix.one_shot_ratio, "Share of one-shot examples")
      ->capture_default_str();
  export_ds->add_option("--validation-size", ex_mix.validation_size, "Validation examples")
      ->capture_default_str();
  export_ds->add_option("--train-out", ex_train_out, "Train JSONL path");
  export_ds->add_option("--validation-out", ex_validation_out, "Validation JSONL path");

  // ---- manifest
  Common mf_c;
  TrainingManifest mf;
  auto* manifest = app.add_subcommand("manifest", "Emit the QLoRA training manifest");
  add_common(manifest, mf_c);
  manifest->add_option("--base-model", mf.base_model, "Base model id")->capture_default_str();
  manifest->add_option("--lora-r", mf.lora.r, "LoRA rank")->capture_default_str();
  manifest->add_option("--lora-alpha", mf.lora.alpha, "LoRA alpha")->capture_default_str();
  manifest->add_option("--lora-dropout", mf.lora.dropout, "LoRA dropout")->capture_default_str();
  manifest->add_option("--epochs", mf.training.epochs, "Epochs")->capture_default_str();
  manifest->add_option("--batch-size", mf.training.batch_size, "Per-device batch size")
      ->capture_default_str();
  manifest->add_option("--learning-rate", mf.training.learning_rate, "Learning rate")
      ->capture_default_str();
  manifest->add_option("--warmup-ratio", mf.training.warmup_ratio, "Warmup ratio")
      ->capture_default_str();
  manifest->add_option("--train-file", mf.train_file, "Train JSONL referenced by the manifest");
  manifest->add_option("--validation-file", mf.validation_file, "Validation JSONL");

  // ---- translate
  Common tr_c;
  std::string tr_in, tr_endpoint, tr_mode = "sampled", tr_trace;
  CompletionClientConfig tr_client;
  DecodingParams tr_dec;
  std::size_t tr_batch = kDefaultBatchSize, tr_mult = kDefaultTokenMultiplier;
  std::int64_t tr_backoff_ms = 1000, tr_timeout_ms = 120000;
  auto* translate = app.add_subcommand("translate", "Send prompts to a completion endpoint");
  add_common(translate, tr_c);
  translate->add_option("--in", tr_in, "Prompt dump (JSONL) or -")->required();
  translate->add_option("--endpoint", tr_endpoint, "Completion endpoint base URL");
  translate->add_option("--model", tr_client.model, "Model name")->capture_default_str();
  translate->add_option("--batch-size", tr_batch, "Prompts per request")->capture_default_str();
  translate->add_option("--token-multiplier", tr_mult, "max_tokens per source word")
      ->capture_default_str();
  translate->add_option("--mode", tr_mode, "sampled|greedy")->capture_default_str();
  translate->add_option("--temperature", tr_dec.temperature, "Sampling temperature")
      ->capture_default_str();
  translate->add_option("--top-p", tr_dec.top_p, "Nucleus mass")->capture_default_str();
  translate->add_option("--stop", tr_dec.stop_sequences, "Stop sequence (repeatable)");
  translate->add_option("--attempts", tr_client.attempts, "Attempts per batch")
      ->capture_default_str();
  translate->add_option("--backoff-ms", tr_backoff_ms, "Initial retry backoff")
      ->capture_default_str();
  translate->add_option("--timeout-ms", tr_timeout_ms, "Per-request timeout")
      ->capture_default_str();
  translate->add_option("--concurrency", tr_client.max_concurrent_batches, "Batches in flight")
      ->capture_default_str();
  translate->add_option("--trace", tr_trace, "JSONL request/response log");

  // ---- evaluate
  Common ev_c;
  std::string ev_hyp, ev_ref, ev_in;
  auto* evaluate = app.add_subcommand("evaluate", "Corpus BLEU, chrF++ and TER");
  add_common(evaluate, ev_c);
  evaluate->add_option("--hyp", ev_hyp, "Hypothesis file (one segment per line)");
  evaluate->add_option("--ref", ev_ref, "Reference file");
  evaluate->add_option("--in", ev_in, "JSONL with hypothesis/text and reference, or -");

  // ---- report
  Common rp_c;
  std::string rp_in, rp_format = "markdown";
  auto* report = app.add_subcommand("report", "Render or re-score a run report");
  add_common(report, rp_c);
  report->add_option("--in", rp_in, "report.json to render");
  report->add_option("--format", rp_format, "markdown|tsv|json")->capture_default_str();

  // ---- run
  Common run_c;
  std::string run_endpoint;
  auto* run = app.add_subcommand("run", "Full experiment from an experiment config");
  add_common(run, run_c);
  run->add_option("--endpoint", run_endpoint, "Override the completion endpoint");

  // ---- mock-server
  Common ms_c;
  std::string ms_mode = "echo-fuzzy", ms_fixtures;
  int ms_port = 0;
  double ms_duration = 0.0;
  auto* mock = app.add_subcommand("mock-server", "Serve a deterministic completion mock");
  add_common(mock, ms_c);
  mock->add_option("--mode", ms_mode, "echo-fuzzy|dictionary|canned")->capture_default_str();
  mock->add_option("--fixtures", ms_fixtures, "JSON {lexicon, canned}");
  mock->add_option("--port", ms_port, "Port (0 picks a free one)")->capture_default_str();
  mock->add_option("--duration", ms_duration, "Seconds to serve (0 = until signalled)");

  // Flag defaults from --config for subcommands that do not own a config
  // schema of their own.
  std::vector<std::string> args = args_in;
  if (!args.empty() && args.front() != "run" && args.front() != "report") {
    for (std::size_t i = 1; i + 1 < args.size(); ++i) {
      if (args[i] == "--config") {
        try {
          const auto extra = config_args(args[i + 1], args);
          args.insert(args.end(), extra.begin(), extra.end());
        } catch (const Error& e) {
          err << "error: " << e.what() << '\n';
          return exit_code_for(e.kind());
        }
        break;
      }
    }
  }

  std::vector<const char*> argv;
  argv.push_back("adaptmt");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kUsageError;
  }

  try {
    if (filter->parsed()) {
      FilterStats stats;
      const auto kept = filter_corpus(load_corpus_spec(filter_in), max_words, &stats);
      const json counts = {{"input", stats.input},
                           {"kept", stats.kept},
                           {"dropped", stats.input - stats.kept},
                           {"duplicates", stats.duplicates},
                           {"empty_side", stats.empty_side},
                           {"over_length", stats.over_length}};
      if (filter_c.output.empty() || filter_c.output == "-") {
        const auto fmt = filter_format == "jsonl" ? CorpusFormat::kJsonl : CorpusFormat::kTsv;
        write_corpus(kept, out, fmt);
        err << "kept " << stats.kept << ", dropped " << stats.input - stats.kept << '\n';
      } else {
        save_corpus(kept, filter_c.output);
        print_json(out, counts);
      }
      return kOk;
    }

    if (split->parsed()) {
      std::string t_out = train_out, v_out = validation_out;
      if (!split_c.output.empty()) {
        if (t_out.empty()) t_out = split_c.output + ".train.tsv";
        if (v_out.empty()) v_out = split_c.output + ".validation.tsv";
      }
      if (t_out.empty() || v_out.empty()) {
        usage_error("split needs --output PREFIX or both --train-out and --validation-out");
      }
      const auto parts = split_corpus(load_corpus_spec(split_in), split_validation, split_c.seed);
      save_corpus(parts.train, t_out);
      save_corpus(parts.validation, v_out);
      print_json(out, {{"train", parts.train.size()},
                       {"validation", parts.validation.size()},
                       {"train_out", t_out},
                       {"validation_out", v_out}});
      return kOk;
    }

    if (embed->parsed()) {
      if (embed_c.output.empty()) usage_error("embed needs --output for the vector cache");
      const auto corpus = load_corpus_spec(embed_in);
      const auto cfg = provider_config(embed_p, embed_c.seed);
      std::vector<std::string> texts;
      EmbeddingCache cache;
      cache.dim = cfg.dim;
      cache.model_name = cfg.model_name;
      for (const auto& p : corpus.pairs) {
        texts.push_back(embed_side == "target" ? p.target : p.source);
        cache.ids.push_back(p.id);
        cache.text_hashes.push_back(text_hash(texts.back()));
      }
      cache.data = embed_rows(texts, cfg);
      write_embedding_cache(embed_c.output, cache);
      print_json(out, {{"count", cache.count()}, {"dim", cache.dim}, {"path", embed_c.output}});
      return kOk;
    }

    if (index_build->parsed()) {
      if (ib_c.output.empty()) usage_error("index-build needs --output for the index file");
      std::vector<float> rows;
      std::vector<std::int64_t> ids;
      std::size_t dim = ib_p.dim;
      if (is_embedding_cache(ib_in)) {
        auto cache = read_embedding_cache(ib_in);
        dim = cache.dim;
        rows = std::move(cache.data);
        ids = cache.ids;
        if (ids.empty()) {
          for (std::size_t i = 0; i < rows.size() / dim; ++i) ids.push_back(static_cast<std::int64_t>(i));
        }
      } else {
        const auto corpus = load_corpus_spec(ib_in);
        std::vector<std::string> texts;
        for (const auto& p : corpus.pairs) {
          texts.push_back(p.source);
          ids.push_back(p.id);
        }
        rows = embed_rows(texts, provider_config(ib_p, ib_c.seed));
      }
      auto index = IvfIndex::train_rows(rows, ivf_config(ib_ivf, dim, ib_c.seed));
      index.add_rows(ids, rows);
      index.seal();
      index.save(ib_c.output);
      json summary = {{"size", index.size()},
                      {"dim", index.dim()},
                      {"nlist", index.nlist()},
                      {"nprobe", index.config().nprobe},
                      {"iterations", index.train_stats().iterations},
                      {"converged", index.train_stats().converged}};
      if (index.train_stats().warning) summary["warning"] = *index.train_stats().warning;
      print_json(out, summary);
      return kOk;
    }

    if (index_search->parsed()) {
      auto index = IvfIndex::load(is_index, is_nprobe);
      std::vector<std::string> queries = is_queries;
      if (!is_in.empty()) {
        for (auto& q : read_text_lines(is_in)) queries.push_back(std::move(q));
      }
      if (queries.empty()) usage_error("index-search needs --query or --in");
      ProviderOpts p = is_p;
      p.dim = index.dim();
      const auto rows = embed_rows(queries, provider_config(p, is_c.seed));
      const auto hits = index.search_batch(rows, is_k);
      Sink sink(is_c.output, out);
      for (std::size_t i = 0; i < queries.size(); ++i) {
        json h = json::array();
        for (const auto& hit : hits[i]) h.push_back({{"id", hit.id}, {"score", hit.score}});
        sink.get() << json{{"query", queries[i]}, {"hits", std::move(h)}}.dump() << '\n';
      }
      sink.finish();
      return kOk;
    }

    if (retrieve->parsed()) {
      const auto test = load_corpus_spec(rt_in);
      auto context = load_corpus_spec(rt_context);
      if (rt_check_leakage) {
        const auto leaked = find_leaked_ids(test, context);
        if (!leaked.empty()) {
          std::string ids;
          for (auto id : leaked) ids += (ids.empty() ? "" : ",") + std::to_string(id);
          throw Error(ErrorKind::kValidation,
                      "test pairs present in the context corpus: ids " + ids);
        }
      }
      const auto pcfg = provider_config(rt_p, rt_c.seed);
      const auto store =
          ContextStore::build(std::move(context), pcfg, ivf_config(rt_ivf, pcfg.dim, rt_c.seed));
      std::vector<std::string> sources;
      for (const auto& p : test.pairs) sources.push_back(p.source);
      const auto found = store.retrieve_batch(sources, rt_k);
      std::vector<RetrievalRecord> records;
      for (std::size_t i = 0; i < found.size(); ++i) records.push_back({test.pairs[i].id, found[i]});
      Sink sink(rt_c.output, out);
      write_retrieval_dump(sink.get(), records);
      sink.finish();
      return kOk;
    }

    if (prompts->parsed()) {
      const auto test = load_corpus_spec(pr_in);
      Condition cond = pr_retrieval.empty() ? Condition::kZeroShot : Condition::kOneShot;
      if (!pr_condition.empty()) cond = parse_condition(pr_condition);
      std::map<std::int64_t, std::vector<FuzzyMatch>> by_id;
      if (cond == Condition::kOneShot) {
        if (pr_retrieval.empty()) usage_error("one-shot prompts need --retrieval");
        for (auto& r : with_input(pr_retrieval, [](std::istream& in) { return read_retrieval_dump(in); })) {
          by_id[r.query_id] = std::move(r.matches);
        }
      }
      std::vector<PromptRecord> records;
      for (const auto& p : test.pairs) {
        PromptRecord r;
        r.id = p.id;
        r.source = p.source;
        r.reference = p.target;
        if (cond == Condition::kOneShot) {
          const auto it = by_id.find(p.id);
          if (it == by_id.end() || it->second.empty()) {
            throw Error(ErrorKind::kValidation, "no retrieval record for pair " + std::to_string(p.id));
          }
          r.prompt = render_few_shot(p.source, it->second, pr_l.names);
        } else {
          r.prompt = render_zero_shot(p.source, pr_l.names);
        }
        records.push_back(std::move(r));
      }
      Sink sink(pr_c.output, out);
      write_prompt_dump(sink.get(), records);
      sink.finish();
      return kOk;
    }

    if (export_ds->parsed()) {
      std::string t_out = ex_train_out, v_out = ex_validation_out;
      if (!ex_c.output.empty()) {
        fs::create_directories(ex_c.output);
        if (t_out.empty()) t_out = (fs::path(ex_c.output) / "train.jsonl").string();
        if (v_out.empty()) v_out = (fs::path(ex_c.output) / "validation.jsonl").string();
      }
      if (t_out.empty() || v_out.empty()) {
        usage_error("export-dataset needs --output DIR or both --train-out and --validation-out");
      }
      ex_mix.seed = ex_c.seed;
      const auto corpus = load_corpus_spec(ex_in);
      std::optional<ContextStore> store;
      if (ex_mix.one_shot_count() > 0) {
        if (ex_context.empty()) usage_error("one-shot examples need --context");
        const auto pcfg = provider_config(ex_p, ex_c.seed);
        store = ContextStore::build(load_corpus_spec(ex_context), pcfg,
                                    ivf_config(ex_ivf, pcfg.dim, ex_c.seed));
      }
      const auto ds = build_finetune_dataset(corpus, store ? &*store : nullptr, ex_mix, ex_l.names);
      write_jsonl(ds.train, t_out);
      write_jsonl(ds.validation, v_out);
      std::size_t one = 0;
      for (const auto* part : {&ds.train, &ds.validation}) {
        for (const auto& e : *part) one += e.shot_type == ShotType::kOne;
      }
      print_json(out, {{"train", ds.train.size()},
                       {"validation", ds.validation.size()},
                       {"one_shot", one},
                       {"zero_shot", ds.train.size() + ds.validation.size() - one},
                       {"train_out", t_out},
                       {"validation_out", v_out}});
      return kOk;
    }

    if (manifest->parsed()) {
      if (mf_c.output.empty() || mf_c.output == "-") {
        mf.validate();
        out << mf.to_json().dump(2) << '\n';
      } else {
        emit_training_manifest(mf, mf_c.output);
        print_json(out, {{"path", mf_c.output}});
      }
      return kOk;
    }

    if (translate->parsed()) {
      if (tr_endpoint.empty()) {
        if (const char* env = std::getenv("ADAPTMT_ENDPOINT"); env && *env) tr_endpoint = env;
      }
      if (tr_endpoint.empty()) usage_error("translate needs --endpoint or ADAPTMT_ENDPOINT");
      tr_client.endpoint = tr_endpoint;
      tr_client.initial_backoff = std::chrono::milliseconds(tr_backoff_ms);
      tr_client.timeout = std::chrono::milliseconds(tr_timeout_ms);
      if (!tr_trace.empty()) tr_client.trace_path = tr_trace;
      tr_dec.mode = parse_decoding_mode(tr_mode);
      const auto records = with_input(tr_in, [](std::istream& in) { return read_prompt_dump(in); });
      const CompletionClient client(tr_client);
      const auto batches = make_batches(records, tr_batch, tr_mult, tr_dec);
      const auto result = client.translate_all(batches);
      Sink sink(tr_c.output, out);
      for (std::size_t i = 0; i < result.results.size(); ++i) {
        const auto& r = result.results[i];
        sink.get() << json{{"id", r.id},
                           {"text", r.text},
                           {"reference", records[i].reference},
                           {"latency_ms", r.latency_ms}}
                          .dump()
                   << '\n';
      }
      sink.finish();
      log::info("translated ", result.results.size(), " segments in ", result.wall_seconds,
                " s (", result.segments_per_second(), " segments/s)");
      return kOk;
    }

    if (evaluate->parsed()) {
      std::vector<EvalPair> pairs;
      if (!ev_in.empty()) {
        pairs = with_input(ev_in, [](std::istream& in) { return read_eval_jsonl(in); });
      } else if (!ev_hyp.empty() && !ev_ref.empty()) {
        pairs = read_eval_pairs(ev_hyp, ev_ref);
      } else {
        usage_error("evaluate needs --in or both --hyp and --ref");
      }
      const auto scores = score_all(pairs);
      Sink sink(ev_c.output, out);
      sink.get() << scores_to_json(scores).dump() << '\n';
      sink.finish();
      return kOk;
    }

    if (report->parsed()) {
      const auto format = parse_report_format(rp_format);
      std::vector<ConditionResult> results;
      if (!rp_in.empty()) {
        const auto text_in = with_input(rp_in, [](std::istream& in) {
          std::ostringstream buf;
          buf << in.rdbuf();
          return buf.str();
        });
        results = parse_report_json(text_in);
      } else if (!rp_c.config.empty()) {
        results = score_artifacts(ExperimentConfig::load(rp_c.config));
      } else {
        usage_error("report needs --in report.json or --config experiment.json");
      }
      Sink sink(rp_c.output, out);
      sink.get() << render_report(results, format);
      sink.finish();
      return kOk;
    }

    if (run->parsed()) {
      if (run_c.config.empty()) usage_error("run needs --config");
      auto cfg = ExperimentConfig::load(run_c.config);
      if (!run_c.output.empty()) cfg.output_dir = run_c.output;
      if (run->count("--seed")) {
        cfg.seed = run_c.seed;
        cfg.provider.seed = run_c.seed;
        cfg.ivf.seed = run_c.seed;
      }
      if (!run_endpoint.empty()) cfg.client.endpoint = run_endpoint;
      const auto results = run_experiment(cfg);
      out << render_report(results, ReportFormat::kMarkdown);
      return kOk;
    }

    if (mock->parsed()) {
      MockFixtures fixtures;
      if (!ms_fixtures.empty()) {
        std::ifstream in(ms_fixtures, std::ios::binary);
        if (!in) throw Error(ErrorKind::kIo, "cannot open " + ms_fixtures);
        try {
          fixtures = MockFixtures::from_json(json::parse(in));
        } catch (const json::exception& e) {
          throw Error(ErrorKind::kValidation, ms_fixtures + ": " + e.what());
        }
      }
      auto server = MockServer::start(parse_mock_mode(ms_mode), std::move(fixtures), ms_port);
      out << server->url() << std::endl;
      g_stop.store(false);
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      const auto t0 = std::chrono::steady_clock::now();
      while (!g_stop.load()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        if (ms_duration > 0 &&
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() >= ms_duration) {
          break;
        }
      }
      server->stop();
      return kOk;
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const json::exception& e) {
    err << "error (validation): " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  err << app.help();
  return kUsageError;
}

}  // namespace adaptmt::cli
