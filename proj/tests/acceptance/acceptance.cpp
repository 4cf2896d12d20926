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

// Runs every acceptance criterion at its stated tolerance and time budget and
// prints one PASS/FAIL line per criterion. Exit status is non-zero when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "adaptmt/corpus.hpp"
#include "adaptmt/eval_harness.hpp"
#include "adaptmt/finetune_export.hpp"
#include "adaptmt/llm_client.hpp"
#include "adaptmt/log.hpp"
#include "adaptmt/mt_metrics.hpp"
#include "adaptmt/prompting.hpp"
#include "adaptmt/retrieval.hpp"
#include "adaptmt/text.hpp"
#include "fixture_scores.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace adaptmt;
namespace fs = std::filesystem;

namespace {

/// Collects the first few failed expectations of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_.size() < 5) failures_.push_back(what);
    ++count_;
  }
  bool ok() const { return count_ == 0; }
  std::string summary() const {
    std::string s = std::to_string(count_) + " failure(s)";
    for (const auto& f : failures_) s += "; " + f;
    return s;
  }

 private:
  std::vector<std::string> failures_;
  std::size_t count_ = 0;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::string> words(std::string_view s) { return text::split_whitespace(s); }

std::vector<float> gaussian_rows(std::size_t n, std::size_t dim, Rng& rng, bool normalize) {
  std::vector<float> rows(n * dim);
  for (auto& x : rows) {
    const double u1 = std::max(rng.uniform01(), 1e-12), u2 = rng.uniform01();
    x = static_cast<float>(std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2));
  }
  if (normalize) {
    for (std::size_t i = 0; i < n; ++i) l2_normalize(std::span<float>(rows).subspan(i * dim, dim));
  }
  return rows;
}

std::vector<std::int64_t> iota_ids(std::size_t n) {
  std::vector<std::int64_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

std::vector<std::int64_t> hit_ids(const std::vector<SearchHit>& hits) {
  std::vector<std::int64_t> out;
  for (const auto& h : hits) out.push_back(h.id);
  return out;
}

void metric_fixture(Check& c) {
  const auto pairs = read_eval_pairs(testing::data_dir() / "metrics_fixture.hyp.txt",
                                     testing::data_dir() / "metrics_fixture.ref.txt");
  c.expect(pairs.size() == 50, "fixture has " + std::to_string(pairs.size()) + " pairs");
  const auto s = score_all(pairs);
  const double want[] = {oracle::kFixtureBleu, oracle::kFixtureChrf, oracle::kFixtureTer};
  for (std::size_t i = 0; i < 3; ++i) {
    c.expect(std::abs(s[i].value - want[i]) <= 0.1,
             s[i].name + " " + fmt(s[i].value) + " vs " + fmt(want[i]));
  }
}

void metric_identities(Check& c) {
  Rng rng(2024, 1);
  const char* decorations[] = {".", ",", " ¿sí?", " 3.5", "!", " (nota)", " «cita»"};
  for (int t = 0; t < 100; ++t) {
    std::vector<EvalPair> same, other;
    const std::size_t n = 1 + rng.uniform_index(40);
    for (std::size_t i = 0; i < n; ++i) {
      std::string s = testing::random_sentence(rng, 1, 30);
      if (rng.uniform_index(2)) s += decorations[rng.uniform_index(7)];
      same.push_back({s, s});
      other.push_back({rng.uniform_index(5) ? testing::random_sentence(rng, 0, 30) : "", s});
    }
    const auto id = score_all(same);
    c.expect(id[0].value == 100.0, "BLEU(X,X) = " + fmt(id[0].value));
    c.expect(id[1].value == 100.0, "chrF++(X,X) = " + fmt(id[1].value));
    c.expect(id[2].value == 0.0, "TER(X,X) = " + fmt(id[2].value));
    const auto o = score_all(other);
    c.expect(o[0].value >= 0.0 && o[0].value <= 100.0, "BLEU range " + fmt(o[0].value));
    c.expect(o[1].value >= 0.0 && o[1].value <= 100.0, "chrF++ range " + fmt(o[1].value));
    c.expect(o[2].value >= 0.0 && std::isfinite(o[2].value), "TER range " + fmt(o[2].value));
  }
}

void ter_shifts(Check& c) {
  const std::vector<std::string> alphabet{"a", "b", "c", "d"};
  std::size_t pairs = 0;
  for (std::size_t len = 1; len <= 6; ++len) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < len; ++i) total *= alphabet.size();
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<std::string> ref(len);
      std::vector<int> letters(len);
      for (std::size_t i = 0, x = code; i < len; ++i, x /= alphabet.size()) {
        letters[i] = static_cast<int>(x % alphabet.size());
        ref[i] = alphabet[letters[i]];
      }
      std::sort(letters.begin(), letters.end());
      do {
        std::vector<std::string> hyp(len);
        for (std::size_t i = 0; i < len; ++i) hyp[i] = alphabet[letters[i]];
        const auto greedy = ter_sentence(hyp, ref).edits;
        const auto plain = oracle::levenshtein(hyp, ref);
        c.expect(greedy <= plain, "greedy exceeds edit distance");
        ++pairs;
      } while (std::next_permutation(letters.begin(), letters.end()));
    }
  }
  c.expect(pairs == 421'644, "enumerated " + std::to_string(pairs) + " pairs");

  const std::pair<const char*, const char*> derived[] = {{"a b x d", "a b c d"},
                                                         {"c d a b", "a b c d"}};
  for (const auto& [h, r] : derived) {
    const auto hw = words(h), rw = words(r);
    const auto greedy = ter_sentence(hw, rw).edits;
    const auto exhaustive = oracle::exhaustive_shift_edits(hw, rw);
    c.expect(greedy == exhaustive, std::string(h) + ": greedy " + std::to_string(greedy) +
                                       " vs exhaustive " + std::to_string(exhaustive));
    const std::vector<EvalPair> p{{h, r}};
    c.expect(ter(p).value == 25.0, std::string(h) + ": TER " + fmt(ter(p).value));
  }
}

void ivf_exhaustive(Check& c) {
  Rng rng(77, 2);
  for (int t = 0; t < 20; ++t) {
    IvfConfig cfg;
    cfg.dim = t % 2 ? 384 : 8;
    cfg.metric = t % 3 == 0 ? Metric::kL2 : Metric::kCosine;
    cfg.nlist = 1 + rng.uniform_index(64);
    const std::size_t n = cfg.nlist + rng.uniform_index(2000 - cfg.nlist + 1);
    cfg.nprobe = cfg.nlist;
    cfg.seed = static_cast<std::uint64_t>(t);
    cfg.kmeans_iters = 10;
    const bool unit = cfg.metric == Metric::kCosine;
    const auto rows = gaussian_rows(n, cfg.dim, rng, unit);
    const auto ids = iota_ids(n);
    auto idx = IvfIndex::train_rows(rows, cfg);
    idx.add_rows(ids, rows);
    idx.seal();
    const auto queries = gaussian_rows(50, cfg.dim, rng, unit);
    const std::size_t k = 1 + rng.uniform_index(20);
    for (std::size_t q = 0; q < 50; ++q) {
      const auto qv = std::span<const float>(queries).subspan(q * cfg.dim, cfg.dim);
      const auto got = hit_ids(idx.search(qv, k));
      const auto want = hit_ids(oracle::exact_topk(cfg.metric, rows, ids, cfg.dim, qv, k));
      c.expect(got == want, "config " + std::to_string(t) + " query " + std::to_string(q));
    }
  }
}

void ivf_recall(Check& c) {
  Rng rng(5, 3);
  std::vector<float> rows;
  for (std::size_t i = 0; i < 1000; ++i) {
    const auto v = deterministic_embed(testing::random_sentence(rng, 3, 15) + " " +
                                           std::to_string(i),
                                       kDefaultEmbeddingDim, 0);
    rows.insert(rows.end(), v.values.begin(), v.values.end());
  }
  const std::size_t dim = kDefaultEmbeddingDim;
  const auto ids = iota_ids(1000);
  IvfConfig cfg;
  cfg.dim = dim;
  cfg.nlist = 32;
  auto idx = IvfIndex::train_rows(rows, cfg);
  idx.add_rows(ids, rows);
  idx.seal();
  std::vector<std::string> queries;
  for (int q = 0; q < 100; ++q) queries.push_back(testing::random_sentence(rng, 3, 15));
  double prev = -1.0;
  std::string curve;
  for (std::size_t nprobe : {1, 2, 4, 8, 16, 32}) {
    double recall = 0.0;
    for (const auto& q : queries) {
      const auto v = deterministic_embed(q, dim, 0);
      recall += oracle::recall_at_k(idx.search(v.values, 10, nprobe),
                                    oracle::exact_topk(Metric::kCosine, rows, ids, dim, v.values, 10));
    }
    recall /= static_cast<double>(queries.size());
    curve += " " + std::to_string(nprobe) + ":" + fmt(recall);
    c.expect(recall >= prev, "recall drops at nprobe " + std::to_string(nprobe));
    prev = recall;
  }
  c.expect(prev == 1.0, "recall at nprobe 32 is " + fmt(prev));
  std::printf("  recall@10%s\n", curve.c_str());
}

void prompt_bytes(Check& c) {
  const LanguageNames langs;
  const auto zero = render_zero_shot("Hola.", langs);
  c.expect(zero.text == "Spanish: Hola.\nEnglish:", "zero-shot template");
  const FuzzyMatch m{{7, "Hola a todos.", "Hello everyone."}, 0.9};
  const auto one = render_few_shot("Hola.", std::span<const FuzzyMatch>(&m, 1), langs);
  c.expect(one.text == "Spanish: Hola a todos.\nEnglish: Hello everyone.\nSpanish: Hola.\nEnglish:",
           "one-shot template");
  c.expect(one.shots == 1 && zero.shots == 0, "shot counts");

  Rng rng(6, 4);
  for (int t = 0; t < 100; ++t) {
    const auto s = testing::random_sentence(rng, 1, 20);
    const FuzzyMatch fm{{t, testing::random_sentence(rng, 1, 20), testing::random_sentence(rng, 1, 20)},
                        rng.uniform01()};
    const auto z = render_zero_shot(s, langs).text;
    const auto o = render_few_shot(s, std::span<const FuzzyMatch>(&fm, 1), langs).text;
    c.expect(o.size() > z.size() && o.ends_with(z), "suffix law");
    c.expect(o.ends_with("English:") && z.ends_with("English:"), "prompt end");
    const auto parsed = parse_prompt(o, langs);
    c.expect(parsed.examples.size() == 1 && parsed.query == s, "parse back");
  }
}

void dataset_mix(Check& c) {
  const auto corpus = testing::synthetic_corpus(25'000, 8);
  EmbeddingProviderConfig provider;
  provider.dim = 64;
  IvfConfig ivf;
  ivf.dim = 64;
  ivf.nlist = 64;
  ivf.nprobe = 4;
  const auto store = ContextStore::build(testing::synthetic_corpus(4'000, 9, 100'000), provider, ivf);
  MixSpec mix;
  mix.total = 20'000;
  mix.one_shot_ratio = 0.5;
  mix.validation_size = 1'000;
  mix.seed = 3;
  const LanguageNames langs;
  const auto a = build_finetune_dataset(corpus, &store, mix, langs);
  c.expect(a.train.size() == 19'000, "train " + std::to_string(a.train.size()));
  c.expect(a.validation.size() == 1'000, "validation " + std::to_string(a.validation.size()));
  std::size_t zero = 0, one = 0;
  for (const auto* part : {&a.train, &a.validation}) {
    for (const auto& e : *part) (e.shot_type == ShotType::kOne ? one : zero)++;
  }
  c.expect(zero == 10'000 && one == 10'000,
           "shots " + std::to_string(zero) + "/" + std::to_string(one));
  const auto b = build_finetune_dataset(corpus, &store, mix, langs);
  c.expect(a.train == b.train && a.validation == b.validation, "second run differs");
}

/// Independent statement of the filter contract.
std::vector<SegmentPair> filter_oracle(const ParallelCorpus& in, std::size_t max_words) {
  auto rtrim = [](std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
  };
  auto count = [](const std::string& s) {
    std::istringstream is(s);
    std::size_t n = 0;
    for (std::string w; is >> w;) ++n;
    return n;
  };
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<SegmentPair> out;
  for (const auto& p : in.pairs) {
    const std::size_t ns = count(p.source), nt = count(p.target);
    if (ns == 0 || nt == 0 || ns > max_words || nt > max_words) continue;
    if (!seen.insert({rtrim(p.source), rtrim(p.target)}).second) continue;
    out.push_back(p);
  }
  return out;
}

void filter_contract(Check& c) {
  Rng rng(9, 5);
  for (int t = 0; t < 1000; ++t) {
    ParallelCorpus corpus;
    const std::size_t n = rng.uniform_index(60);
    for (std::size_t i = 0; i < n; ++i) {
      SegmentPair p{static_cast<std::int64_t>(i), testing::random_sentence(rng, 1, 8),
                    testing::random_sentence(rng, 1, 8)};
      switch (rng.uniform_index(8)) {
        case 0:
          if (!corpus.pairs.empty()) {
            const auto& prev = corpus.pairs[rng.uniform_index(corpus.pairs.size())];
            p.source = prev.source;
            p.target = prev.target + (rng.uniform_index(2) ? " " : "");
          }
          break;
        case 1: p.source = testing::random_sentence(rng, 70, 70); break;
        case 2: p.target = testing::random_sentence(rng, 71, 71); break;
        case 3: p.source = testing::random_sentence(rng, 69, 72); break;
        case 4: p.target = rng.uniform_index(2) ? "" : "  "; break;
        default: break;
      }
      corpus.pairs.push_back(std::move(p));
    }
    const auto once = filter_corpus(corpus, 70);
    const auto twice = filter_corpus(once, 70);
    c.expect(once.pairs == twice.pairs, "not idempotent in corpus " + std::to_string(t));
    c.expect(once.pairs == filter_oracle(corpus, 70), "differs from oracle in corpus " + std::to_string(t));
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& p : once.pairs) {
      c.expect(text::split_whitespace(p.source).size() <= 70 &&
                   text::split_whitespace(p.target).size() <= 70,
               "side over 70 words kept");
      c.expect(seen.insert({p.source, p.target}).second, "duplicate kept");
    }
  }
}

void adaptive_gain(Check& c) {
  testing::TempDir dir("acceptance");
  auto context = testing::synthetic_corpus(200, 10, 1'000);
  ParallelCorpus test;
  for (int i = 0; i < 20; ++i) {
    const auto& p = context.pairs[static_cast<std::size_t>(i) * 7];
    test.pairs.push_back({i, p.source, p.target});
  }
  save_corpus(test, dir / "test.tsv");
  save_corpus(context, dir / "context.tsv");

  ExperimentConfig cfg;
  cfg.test_corpus = (dir / "test.tsv").string();
  cfg.context_corpus = (dir / "context.tsv").string();
  cfg.ivf.nlist = 8;
  cfg.ivf.nprobe = 8;
  cfg.leakage = LeakageMode::kOff;
  cfg.output_dir = dir / "run";
  cfg.model_label = "mock";
  cfg.client.attempts = 1;

  // Self-retrieval precondition: each test source finds its own pair first.
  const auto store = ContextStore::build(context, cfg.provider, cfg.ivf);
  for (const auto& p : test.pairs) {
    const auto m = store.retrieve(p.source, 1);
    c.expect(!m.empty() && m[0].pair.source == p.source && m[0].pair.target == p.target,
             "self-retrieval fails for test id " + std::to_string(p.id));
  }

  auto server = MockServer::start(MockMode::kEchoFuzzy, {});
  cfg.client.endpoint = server->url();
  const auto results = run_experiment(cfg);
  std::map<Condition, std::vector<MetricScore>> by;
  for (const auto& r : results) by[r.condition] = r.scores;
  c.expect(by.size() == 2, "expected two conditions");
  c.expect(by[Condition::kOneShot].at(0).value == 100.0,
           "one-shot BLEU " + fmt(by[Condition::kOneShot].at(0).value));
  c.expect(by[Condition::kOneShot].at(2).value == 0.0,
           "one-shot TER " + fmt(by[Condition::kOneShot].at(2).value));
  c.expect(by[Condition::kZeroShot].at(0).value == 0.0,
           "zero-shot BLEU " + fmt(by[Condition::kZeroShot].at(0).value));
  const auto md = testing::read_file(dir / "run" / "report.md");
  c.expect(md.rfind("| Model | Context | BLEU ↑ | chrF++ ↑ | TER ↓ |", 0) == 0, "report header");
  c.expect(md.find("| mock | zero-shot |") < md.find("| mock | one-shot |"), "report rows");
}

void batching(Check& c) {
  auto check_batches = [&](const std::vector<std::string>& sources, std::size_t batch_size) {
    std::vector<RenderedPrompt> prompts;
    for (const auto& s : sources) prompts.push_back(render_zero_shot(s, LanguageNames{}));
    const auto batches = make_batches(prompts, sources, batch_size, 4);
    std::size_t next = 0;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      const auto& batch = batches[b];
      const std::size_t expect_size = std::min(batch_size, sources.size() - next);
      c.expect(batch.size() == expect_size, "batch " + std::to_string(b) + " size");
      std::size_t longest = 0;
      for (std::size_t i = 0; i < batch.size(); ++i) {
        c.expect(batch.ids[i] == static_cast<std::int64_t>(next + i), "order");
        longest = std::max(longest, text::split_whitespace(sources[next + i]).size());
      }
      c.expect(batch.params.max_tokens == std::max<std::size_t>(1, longest * 4), "max_tokens");
      next += batch.size();
    }
    c.expect(next == sources.size(), "coverage");
    return batches;
  };

  Rng rng(10, 6);
  std::vector<std::string> sources;
  for (int i = 0; i < 45; ++i) sources.push_back(testing::random_sentence(rng, 1, 40));
  const auto b = check_batches(sources, kDefaultBatchSize);
  c.expect(b.size() == 3 && b[0].size() == 20 && b[1].size() == 20 && b[2].size() == 5,
           "45 prompts do not chunk as 20/20/5");
  for (int t = 0; t < 200; ++t) {
    std::vector<std::string> s;
    const std::size_t n = 1 + rng.uniform_index(150);
    for (std::size_t i = 0; i < n; ++i) s.push_back(testing::random_sentence(rng, 1, 70));
    check_batches(s, 1 + rng.uniform_index(40));
  }
}

void manifest(Check& c) {
  testing::TempDir dir("acceptance");
  emit_training_manifest(TrainingManifest{}, dir / "manifest.json");
  const auto j = nlohmann::json::parse(testing::read_file(dir / "manifest.json"));
  const nlohmann::json want = {
      {"quantization",
       {{"load_in_4bit", true}, {"quant_type", "nf4"}, {"double_quant", true}, {"compute_dtype", "bfloat16"}}},
      {"lora", {{"r", 64}, {"alpha", 16}, {"dropout", 0.1}, {"bias", "none"}}},
      {"training",
       {{"epochs", 1}, {"batch_size", 32}, {"warmup_ratio", 0.03}, {"learning_rate", 2e-3},
        {"lr_scheduler", "constant"}, {"bf16", true}}},
  };
  for (const auto& [section, values] : want.items()) {
    c.expect(j.contains(section) && j[section] == values, "section " + section + " differs");
  }
  std::set<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.insert(k);
  c.expect(keys == std::set<std::string>{"schema_version", "base_model", "quantization", "lora", "training"},
           "unexpected top-level keys");
  c.expect(TrainingManifest::from_json(j).to_json() == j, "round trip");
}

void persistence(Check& c) {
  testing::TempDir dir("acceptance");
  Rng rng(12, 7);
  IvfConfig cfg;
  cfg.dim = 64;
  cfg.nlist = 40;
  cfg.nprobe = 6;
  const auto rows = gaussian_rows(3'000, cfg.dim, rng, false);
  auto idx = IvfIndex::train_rows(rows, cfg);
  idx.add_rows(iota_ids(3'000), rows);
  idx.seal();
  idx.save(dir / "index.ivf");
  const auto loaded = IvfIndex::load(dir / "index.ivf");
  const auto queries = gaussian_rows(100, cfg.dim, rng, false);
  for (std::size_t q = 0; q < 100; ++q) {
    const auto qv = std::span<const float>(queries).subspan(q * cfg.dim, cfg.dim);
    const auto a = idx.search(qv, 10), b = loaded.search(qv, 10);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      same = a[i].id == b[i].id && std::memcmp(&a[i].score, &b[i].score, sizeof(float)) == 0;
    }
    c.expect(same, "query " + std::to_string(q));
  }
}

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  log::set_level(log::Level::kError);
  const std::vector<Criterion> criteria = {
      {1, "metric oracle equivalence", 1, metric_fixture},
      {2, "metric identities", 5, metric_identities},
      {3, "TER shift correctness", 30, ter_shifts},
      {4, "IVF exhaustive equivalence", 60, ivf_exhaustive},
      {5, "IVF recall monotonicity", 30, ivf_recall},
      {6, "prompt byte-exactness", 1, prompt_bytes},
      {7, "dataset mix exactness", 60, dataset_mix},
      {8, "filter contract", 10, filter_contract},
      {9, "end-to-end adaptive gain", 30, adaptive_gain},
      {10, "batching rule", 1, batching},
      {11, "manifest fidelity", 1, manifest},
      {12, "index persistence", 10, persistence},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    check.expect(secs < cr.budget_seconds, "over time budget");
    std::printf("%s %2d %-28s %8.3fs / %.0fs%s\n", check.ok() ? "PASS" : "FAIL", cr.number, cr.name,
                secs, cr.budget_seconds, check.ok() ? "" : ("  " + check.summary()).c_str());
    std::fflush(stdout);
    if (!check.ok()) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
