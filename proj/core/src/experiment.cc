// Copyright 2026 The cfair Authors.
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


#include "cfair/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>
#include <unordered_map>

#include "cfair/dataset.h"
#include "cfair/errors.h"
#include "cfair/external_scorer.h"
#include "cfair/filter.h"
#include "cfair/random.h"
#include "cfair/sha256.h"
#include "cfair/synth.h"

namespace cfair {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSplitStream = 0x5e5;
constexpr std::uint64_t kFoldSeedStream = 0xf01d;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

json NumberOrNull(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json OptionalOrNull(const std::optional<double>& v) {
  return v ? NumberOrNull(*v) : json(nullptr);
}

std::string Resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || fs::path(path).is_absolute() || base_dir.empty()) {
    return path;
  }
  return (fs::path(base_dir) / path).string();
}

struct VariantSpec {
  bool masked = false;
  bool pairs = false;
  PairingPolicy policy = PairingPolicy::kAll;
};

VariantSpec SpecFor(const std::string& name) {
  if (name == "vanilla") return {false, false, PairingPolicy::kAll};
  if (name == "mask") return {true, false, PairingPolicy::kAll};
  if (name == "clp_neg") return {false, true, PairingPolicy::kNeg};
  if (name == "clp_sc") return {false, true, PairingPolicy::kSc};
  if (name == "clp_asy") return {false, true, PairingPolicy::kAsy};
  throw ValidationError("unknown model variant '" + name + "'");
}

// Memoizes a model's probability per token sequence.
class ProbMemo {
 public:
  ProbMemo(const TrainedModel& model, const SgtLexicon& lexicon)
      : model_(model), lexicon_(lexicon) {}

  double operator()(std::span<const std::string> tokens) {
    std::string key = JoinTokens(tokens);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const double p = Predict(model_, tokens, &lexicon_).prob;
    memo_.emplace(std::move(key), p);
    return p;
  }

 private:
  const TrainedModel& model_;
  const SgtLexicon& lexicon_;
  std::unordered_map<std::string, double> memo_;
};

double SetCtf(std::span<const CounterfactualSet> sets, ProbMemo& prob) {
  std::vector<double> a;
  std::vector<double> b;
  for (const CounterfactualSet& set : sets) {
    const double p = prob(set.original.tokens);
    for (const CounterfactualVariant& v : set.variants) {
      a.push_back(p);
      b.push_back(prob(v.tokens));
    }
  }
  if (a.empty()) return kNaN;
  return CtfFromProbs(a, b).mean_abs_diff;
}

SummaryRow MeanOver(const std::vector<FoldMetrics>& folds) {
  SummaryRow m;
  for (const FoldMetrics& f : folds) {
    m.acc += f.prf.accuracy;
    m.precision += f.prf.precision;
    m.recall += f.prf.recall;
    m.f1 += f.prf.f1;
    m.tp_mean += f.odds.tp_mean;
    m.tp_sd += f.odds.tp_sd;
    m.tn_mean += f.odds.tn_mean;
    m.tn_sd += f.odds.tn_sd;
    m.ctf_asym += f.ctf_asym;
    m.ctf_sym += f.ctf_sym;
  }
  const double n = static_cast<double>(folds.size());
  for (double* v : {&m.acc, &m.precision, &m.recall, &m.f1, &m.tp_mean,
                    &m.tp_sd, &m.tn_mean, &m.tn_sd, &m.ctf_asym, &m.ctf_sym}) {
    *v /= n;
  }
  return m;
}

json PrfJson(const PrfReport& prf) {
  return {{"accuracy", prf.accuracy}, {"precision", prf.precision},
          {"recall", prf.recall},     {"f1", prf.f1},
          {"tp", prf.tp},             {"fp", prf.fp},
          {"tn", prf.tn},             {"fn", prf.fn}};
}

json OddsJson(const OddsReport& odds) {
  return {{"tp_mean", NumberOrNull(odds.tp_mean)},
          {"tp_sd", NumberOrNull(odds.tp_sd)},
          {"tn_mean", NumberOrNull(odds.tn_mean)},
          {"tn_sd", NumberOrNull(odds.tn_sd)}};
}

json SummaryJson(const SummaryRow& m) {
  return {{"acc", NumberOrNull(m.acc)},
          {"precision", NumberOrNull(m.precision)},
          {"recall", NumberOrNull(m.recall)},
          {"f1", NumberOrNull(m.f1)},
          {"tp_mean", NumberOrNull(m.tp_mean)},
          {"tp_sd", NumberOrNull(m.tp_sd)},
          {"tn_mean", NumberOrNull(m.tn_mean)},
          {"tn_sd", NumberOrNull(m.tn_sd)},
          {"ctf_asym", NumberOrNull(m.ctf_asym)},
          {"ctf_sym", NumberOrNull(m.ctf_sym)}};
}

}  // namespace

const std::vector<std::string>& KnownVariants() {
  static const std::vector<std::string> names = {"vanilla", "mask", "clp_neg",
                                                 "clp_sc", "clp_asy"};
  return names;
}

void RunConfig::Validate() const {
  if (dataset_path.empty() == synth_json.empty()) {
    throw ValidationError("config needs exactly one of 'dataset' or 'synth'");
  }
  ValidateModelling();
}

void RunConfig::ValidateModelling() const {
  if (folds < 2) throw ValidationError("folds must be >= 2");
  if (!(test_fraction > 0.0 && test_fraction <= 0.5)) {
    throw ValidationError("test_fraction must lie in (0, 0.5]");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ValidationError("threshold must lie in (0, 1)");
  }
  if (variants.empty()) throw ValidationError("no model variants requested");
  std::set<std::string> seen;
  for (const std::string& v : variants) {
    SpecFor(v);
    if (!seen.insert(v).second) {
      throw ValidationError("variant '" + v + "' listed twice");
    }
  }
  if (scorer_kind == ScorerKind::kModelFile && scorer_model_path.empty()) {
    throw ValidationError("scorer model path is empty");
  }
  if (scorer_kind == ScorerKind::kExternal && scorer_command.empty()) {
    throw ValidationError("external scorer command is empty");
  }
  ngram.Validate();
  hyper.features.Validate();
  hyper.train.Validate();
}

RunConfig RunConfigFromJson(std::string_view content,
                            const std::string& base_dir) {
  static const std::set<std::string> kKeys = {
      "dataset", "synth", "lexicon", "adjectives", "scorer", "variants",
      "lambda", "epochs", "learning_rate", "batch_size", "pairs_per_example",
      "feature_dim", "hash_seed", "folds", "test_fraction", "seed",
      "threshold", "out_dir", "cache_dir"};
  RunConfig c;
  try {
    const json root = json::parse(content);
    if (!root.is_object()) throw ValidationError("run config must be an object");
    for (const auto& [key, value] : root.items()) {
      if (!kKeys.count(key)) {
        throw ValidationError("unknown run config key '" + key + "'");
      }
    }
    c.dataset_path = Resolve(base_dir, root.value("dataset", std::string()));
    if (auto s = root.find("synth"); s != root.end()) c.synth_json = s->dump();
    c.lexicon_path = Resolve(base_dir, root.value("lexicon", std::string()));
    c.adjectives_path =
        Resolve(base_dir, root.value("adjectives", std::string()));
    if (auto s = root.find("scorer"); s != root.end()) {
      const std::string type = s->value("type", std::string("ngram"));
      if (type == "ngram") {
        c.scorer_kind = RunConfig::ScorerKind::kNgramOnData;
        c.ngram.order = s->value("order", c.ngram.order);
        c.ngram.discount = s->value("discount", c.ngram.discount);
        c.ngram.min_count = s->value("min_count", c.ngram.min_count);
      } else if (type == "model") {
        c.scorer_kind = RunConfig::ScorerKind::kModelFile;
        c.scorer_model_path = Resolve(base_dir, s->at("path").get<std::string>());
      } else if (type == "external") {
        c.scorer_kind = RunConfig::ScorerKind::kExternal;
        c.scorer_command = s->at("command").get<std::string>();
      } else {
        throw ValidationError("scorer type must be ngram, model or external");
      }
    }
    if (auto v = root.find("variants"); v != root.end()) {
      c.variants = v->get<std::vector<std::string>>();
    }
    c.hyper.train.lambda = root.value("lambda", 1.0);
    c.hyper.train.epochs = root.value("epochs", c.hyper.train.epochs);
    c.hyper.train.learning_rate =
        root.value("learning_rate", c.hyper.train.learning_rate);
    c.hyper.train.batch_size = root.value("batch_size", c.hyper.train.batch_size);
    c.hyper.train.pairs_per_example =
        root.value("pairs_per_example", c.hyper.train.pairs_per_example);
    c.hyper.features.dim = root.value("feature_dim", c.hyper.features.dim);
    c.hyper.features.hash_seed =
        root.value("hash_seed", c.hyper.features.hash_seed);
    c.folds = root.value("folds", c.folds);
    c.test_fraction = root.value("test_fraction", c.test_fraction);
    c.seed = root.value("seed", c.seed);
    c.threshold = root.value("threshold", c.threshold);
    c.out_dir = Resolve(base_dir, root.value("out_dir", std::string()));
    c.cache_dir = Resolve(base_dir, root.value("cache_dir", std::string()));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid run config: ") + e.what());
  }
  c.Validate();
  return c;
}

const VariantReport* ExperimentReport::Find(std::string_view name) const {
  for (const VariantReport& v : variants) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

ExperimentReport RunExperimentOnDocs(std::span<const Document> docs,
                                     const SgtLexicon& lexicon,
                                     std::span<const Adjective> adjectives,
                                     Scorer* scorer,
                                     const std::string& scorer_identity,
                                     const RunConfig& config,
                                     const std::string& cache_dir,
                                     std::ostream* log) {
  config.ValidateModelling();
  const std::size_t n = docs.size();
  const std::size_t k = static_cast<std::size_t>(config.folds);
  for (const Document& d : docs) {
    if (!d.label) throw ValidationError("document '" + d.id + "' has no label");
  }
  std::vector<VariantSpec> specs;
  bool need_asy = false;
  for (const std::string& name : config.variants) {
    specs.push_back(SpecFor(name));
    need_asy = need_asy || (specs.back().pairs &&
                            specs.back().policy == PairingPolicy::kAsy);
  }
  if (need_asy && scorer == nullptr) {
    throw PreconditionError("clp_asy needs a likelihood scorer");
  }

  // Split: seeded shuffle, leading share is the held-out test set.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng split_rng(MixSeed(config.seed, kSplitStream));
  split_rng.Shuffle(order);
  const std::size_t n_test = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::llround(static_cast<double>(n) * config.test_fraction)));
  if (n < n_test + k) {
    throw ValidationError("dataset too small for the requested split");
  }
  const std::vector<std::size_t> test(order.begin(), order.begin() + n_test);
  const std::vector<std::size_t> pool(order.begin() + n_test, order.end());

  ExperimentReport report;
  report.n_docs = n;
  for (std::size_t i : test) report.test_ids.push_back(docs[i].id);

  // Mentions and counterfactual sets for single-mention documents.
  std::vector<std::optional<std::size_t>> cf_index(n);
  std::vector<CounterfactualSet> cfsets;
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<Mention> m = FindMentions(docs[i].tokens, lexicon);
    if (m.size() != 1) {
      ++report.n_excluded_from_pairing;
      continue;
    }
    cf_index[i] = cfsets.size();
    cfsets.push_back(GenerateAll(docs[i], m.front(), lexicon));
  }
  if (log != nullptr && report.n_excluded_from_pairing > 0) {
    *log << report.n_excluded_from_pairing
         << " documents without exactly one SGT mention are excluded from "
            "pairing and odds grouping\n";
  }

  std::vector<ScoredSet> scored;
  if (scorer != nullptr) {
    const std::string cache_path =
        cache_dir.empty() ? std::string() : (fs::path(cache_dir) / "scores.tsv").string();
    ScoreCache cache =
        cache_path.empty() ? ScoreCache{} : ScoreCache::Load(cache_path);
    scored = ScoreSets(*scorer, cfsets, cache);
    if (!cache_path.empty()) cache.Save(cache_path);
  }

  // Asymmetric test pairs: variants the scorer ranks strictly below the
  // original.
  std::vector<CounterfactualSet> asym_sets;
  if (!scored.empty()) {
    for (std::size_t i : test) {
      if (!cf_index[i]) continue;
      const ScoredSet& s = scored[*cf_index[i]];
      CounterfactualSet set{s.cfset.original, s.cfset.mention, {}};
      for (std::size_t v = 0; v < s.variant_lls.size(); ++v) {
        if (s.variant_lls[v] < s.original_ll) {
          set.variants.push_back(s.cfset.variants[v]);
        }
      }
      report.n_asym_pairs += set.variants.size();
      if (!set.variants.empty()) asym_sets.push_back(std::move(set));
    }
  }
  const std::vector<CounterfactualSet> sym_sets =
      GenerateSymTemplates(lexicon, adjectives);
  for (const CounterfactualSet& s : sym_sets) {
    report.n_sym_pairs += s.variants.size();
  }

  // Features, computed once.
  const FeatureConfig& fc = config.hyper.features;
  std::vector<FeatureVector> plain(n);
  std::vector<FeatureVector> masked(n);
  const bool any_masked =
      std::any_of(specs.begin(), specs.end(), [](const VariantSpec& s) { return s.masked; });
  for (std::size_t i = 0; i < n; ++i) {
    plain[i] = Featurize(docs[i].tokens, fc);
    if (any_masked) masked[i] = Featurize(MaskSgtTokens(docs[i].tokens, lexicon), fc);
  }
  std::map<PairingPolicy, std::vector<std::vector<FeatureVector>>> targets;
  for (const VariantSpec& spec : specs) {
    if (!spec.pairs || targets.count(spec.policy)) continue;
    auto& per_doc = targets[spec.policy];
    per_doc.resize(n);
    for (std::size_t i : pool) {
      if (!cf_index[i]) continue;
      const std::size_t c = *cf_index[i];
      const SymmetricSet kept = SelectPairingTargets(
          cfsets[c], scored.empty() ? nullptr : &scored[c], lexicon,
          spec.policy);
      for (std::size_t v : kept.kept) {
        per_doc[i].push_back(Featurize(cfsets[c].variants[v].tokens, fc));
      }
    }
  }

  std::vector<int> test_labels;
  std::vector<EntryId> odds_groups;
  std::vector<int> odds_labels;
  for (std::size_t i : test) {
    test_labels.push_back(*docs[i].label);
    if (cf_index[i]) {
      odds_groups.push_back(cfsets[*cf_index[i]].mention.entry_id);
      odds_labels.push_back(*docs[i].label);
    }
  }

  const std::string model_dir =
      cache_dir.empty() ? std::string() : (fs::path(cache_dir) / "models").string();
  if (!model_dir.empty()) fs::create_directories(model_dir);

  for (std::size_t v = 0; v < specs.size(); ++v) {
    report.variants.push_back(VariantReport{config.variants[v], {}, {}});
  }
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> train;
    std::vector<std::string> train_ids;
    for (std::size_t p = 0; p < pool.size(); ++p) {
      if (p % k == f) continue;
      train.push_back(pool[p]);
      train_ids.push_back(docs[pool[p]].id);
    }
    const std::string train_digest = Sha256Hex(JoinTokens(train_ids, "\n"));
    report.fold_train_ids.push_back(train_ids);

    for (std::size_t v = 0; v < specs.size(); ++v) {
      const VariantSpec& spec = specs[v];
      TrainOptions options = config.hyper.train;
      options.seed = MixSeed(config.seed, kFoldSeedStream + f);
      if (!spec.pairs) options.lambda = 0.0;

      const json key = {{"variant", config.variants[v]},
                        {"lambda", options.lambda},
                        {"epochs", options.epochs},
                        {"learning_rate", options.learning_rate},
                        {"batch_size", options.batch_size},
                        {"pairs_per_example", options.pairs_per_example},
                        {"seed", options.seed},
                        {"dim", fc.dim},
                        {"hash_seed", fc.hash_seed},
                        {"ngram_orders", fc.ngram_orders},
                        {"scorer", spec.policy == PairingPolicy::kAsy && spec.pairs
                                       ? scorer_identity
                                       : std::string()},
                        {"train", train_digest}};
      const std::string model_path =
          model_dir.empty()
              ? std::string()
              : (fs::path(model_dir) / (Sha256Hex(key.dump()) + ".json")).string();

      TrainedModel model;
      bool loaded = false;
      if (!model_path.empty() && fs::exists(model_path)) {
        model = TrainedModel::FromJson(ReadFile(model_path));
        loaded = true;
      }
      if (!loaded) {
        std::vector<TrainingExample> examples(train.size());
        for (std::size_t t = 0; t < train.size(); ++t) {
          const std::size_t i = train[t];
          examples[t].x = spec.masked ? masked[i] : plain[i];
          examples[t].label = *docs[i].label;
          if (spec.pairs) examples[t].pair_targets = targets.at(spec.policy)[i];
        }
        model.config = fc;
        model.params = TrainLinear(examples, fc.dim, options);
        model.provenance = Provenance{PairingPolicyName(spec.policy),
                                      options.lambda,
                                      options.epochs,
                                      options.learning_rate,
                                      options.batch_size,
                                      options.pairs_per_example,
                                      options.seed,
                                      spec.masked};
        if (!model_path.empty()) WriteFile(model_path, model.ToJson());
      }

      ProbMemo prob(model, lexicon);
      FoldMetrics m;
      m.n_train = train.size();
      std::vector<double> test_probs;
      std::vector<double> odds_probs;
      for (std::size_t i : test) {
        const double p = prob(docs[i].tokens);
        test_probs.push_back(p);
        if (cf_index[i]) odds_probs.push_back(p);
      }
      m.prf = PrfFromPredictions(test_labels, test_probs, config.threshold);
      if (!odds_groups.empty()) {
        m.odds = OddsFromPredictions(odds_groups, odds_labels, odds_probs,
                                     config.threshold);
      } else {
        m.odds.tp_mean = m.odds.tp_sd = m.odds.tn_mean = m.odds.tn_sd = kNaN;
      }
      m.ctf_sym = SetCtf(sym_sets, prob);
      m.ctf_asym = SetCtf(asym_sets, prob);
      report.variants[v].folds.push_back(std::move(m));
      if (log != nullptr) {
        *log << "fold " << f + 1 << "/" << k << " " << config.variants[v]
             << (loaded ? " (cached)" : "") << ": acc "
             << report.variants[v].folds.back().prf.accuracy << ", ctf_sym "
             << report.variants[v].folds.back().ctf_sym << "\n";
      }
    }
  }
  for (VariantReport& vr : report.variants) vr.mean = MeanOver(vr.folds);
  return report;
}

ExperimentReport RunExperiment(const RunConfig& config,
                               const ExperimentOptions& options) {
  config.Validate();
  const SgtLexicon lexicon = config.lexicon_path.empty()
                                 ? SgtLexicon::Default()
                                 : SgtLexicon::FromJson(ReadFile(config.lexicon_path));
  const std::vector<Adjective> adjectives =
      config.adjectives_path.empty()
          ? DefaultAdjectives()
          : ParseAdjectives(ReadFile(config.adjectives_path));
  std::vector<Document> docs;
  if (!config.synth_json.empty()) {
    SynthDistribution dist(lexicon,
                           SynthConfigFromJson(config.synth_json, lexicon));
    docs = dist.Generate().docs;
  } else {
    docs = ReadDatasetJsonl(config.dataset_path, LabelRequirement::kRequired);
  }
  if (docs.empty()) throw ValidationError("dataset is empty");

  std::unique_ptr<Scorer> scorer;
  std::string identity;
  switch (config.scorer_kind) {
    case RunConfig::ScorerKind::kNgramOnData: {
      NgramModel lm = NgramModel::Train(std::span<const Document>(docs), config.ngram);
      identity = "ngram:" + Sha256Hex(lm.ToJson());
      scorer = std::make_unique<NgramScorer>(std::move(lm));
      break;
    }
    case RunConfig::ScorerKind::kModelFile: {
      NgramModel lm = NgramModel::FromJson(ReadFile(config.scorer_model_path));
      identity = "ngram:" + Sha256Hex(lm.ToJson());
      scorer = std::make_unique<NgramScorer>(std::move(lm));
      break;
    }
    case RunConfig::ScorerKind::kExternal: {
      auto external = std::make_unique<ExternalScorer>(config.scorer_command);
      external->Probe();
      identity = "external:" + config.scorer_command;
      scorer = std::move(external);
      break;
    }
  }

  std::string cache_dir;
  if (options.use_cache) {
    cache_dir = config.cache_dir;
    if (cache_dir.empty() && !config.out_dir.empty()) {
      cache_dir = (fs::path(config.out_dir) / "cache").string();
    }
    if (!cache_dir.empty()) {
      fs::create_directories(cache_dir);
      // Scores depend on the scorer, so each scorer gets its own cache.
      cache_dir = (fs::path(cache_dir) / Sha256Hex(identity).substr(0, 16)).string();
      fs::create_directories(cache_dir);
    }
  }
  ExperimentReport report =
      RunExperimentOnDocs(docs, lexicon, adjectives, scorer.get(), identity,
                          config, cache_dir, options.log);
  if (!config.out_dir.empty()) {
    fs::create_directories(config.out_dir);
    WriteFile((fs::path(config.out_dir) / "report.json").string(),
              ReportJson(report, config));
    WriteFile((fs::path(config.out_dir) / "report.csv").string(),
              ReportCsv(report));
  }
  return report;
}

std::string ReportCsv(const ExperimentReport& report) {
  std::string out =
      "model,acc,precision,recall,f1,tp_mean,tp_sd,tn_mean,tn_sd,ctf_asym,"
      "ctf_sym\n";
  char buffer[64];
  for (const VariantReport& v : report.variants) {
    out += v.name;
    const SummaryRow& m = v.mean;
    for (double value : {m.acc, m.precision, m.recall, m.f1, m.tp_mean,
                         m.tp_sd, m.tn_mean, m.tn_sd, m.ctf_asym, m.ctf_sym}) {
      if (std::isfinite(value)) {
        std::snprintf(buffer, sizeof(buffer), ",%.6f", value);
        out += buffer;
      } else {
        out += ",";
      }
    }
    out += '\n';
  }
  return out;
}

std::string ReportJson(const ExperimentReport& report,
                       const RunConfig& config) {
  json root;
  root["metadata"] = {
      {"ctf_scale", "probability"},
      {"clp_scale", "logit"},
      {"threshold", config.threshold},
      {"folds", config.folds},
      {"test_fraction", config.test_fraction},
      {"seed", config.seed},
      {"lambda", config.hyper.train.lambda},
      {"n_docs", report.n_docs},
      {"n_test", report.test_ids.size()},
      {"n_excluded_from_pairing", report.n_excluded_from_pairing},
      {"n_sym_pairs", report.n_sym_pairs},
      {"n_asym_pairs", report.n_asym_pairs}};
  json rows = json::array();
  for (const VariantReport& v : report.variants) {
    json folds = json::array();
    for (const FoldMetrics& f : v.folds) {
      json fold = PrfJson(f.prf);
      fold.update(OddsJson(f.odds));
      fold["ctf_sym"] = NumberOrNull(f.ctf_sym);
      fold["ctf_asym"] = NumberOrNull(f.ctf_asym);
      fold["n_train"] = f.n_train;
      folds.push_back(std::move(fold));
    }
    rows.push_back({{"model", v.name}, {"mean", SummaryJson(v.mean)},
                    {"folds", std::move(folds)}});
  }
  root["variants"] = std::move(rows);
  return root.dump(2);
}

std::string FairnessReportJson(const PrfReport& prf, const OddsReport& odds,
                               std::optional<double> ctf_sym,
                               std::optional<double> ctf_asym,
                               double threshold) {
  json root = {{"accuracy", prf.accuracy},
               {"precision", prf.precision},
               {"recall", prf.recall},
               {"f1", prf.f1},
               {"tp_mean", NumberOrNull(odds.tp_mean)},
               {"tp_sd", NumberOrNull(odds.tp_sd)},
               {"tn_mean", NumberOrNull(odds.tn_mean)},
               {"tn_sd", NumberOrNull(odds.tn_sd)},
               {"ctf_sym", OptionalOrNull(ctf_sym)},
               {"ctf_asym", OptionalOrNull(ctf_asym)}};
  json groups = json::object();
  for (const auto& [entry, rates] : odds.per_sgt) {
    groups[std::to_string(entry)] = {{"tp_rate", OptionalOrNull(rates.tp_rate)},
                                     {"tn_rate", OptionalOrNull(rates.tn_rate)},
                                     {"n_pos", rates.n_pos},
                                     {"n_neg", rates.n_neg}};
  }
  root["metadata"] = {{"ctf_scale", "probability"},
                      {"threshold", threshold},
                      {"counts", {{"tp", prf.tp}, {"fp", prf.fp},
                                  {"tn", prf.tn}, {"fn", prf.fn}}},
                      {"per_sgt", std::move(groups)}};
  return root.dump(2);
}

}  // namespace cfair
