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


// Cross-validated comparison of classifier variants: a seeded held-out test
// split, k training folds over the remainder, and per-variant accuracy,
// equality-of-odds and CTF on symmetric template pairs and on likelihood-
// asymmetric pairs from the test set.

#ifndef CFAIR_EXPERIMENT_H_
#define CFAIR_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfair/classifier.h"
#include "cfair/lexicon.h"
#include "cfair/metrics.h"
#include "cfair/ngram.h"
#include "cfair/scoring.h"
#include "cfair/text.h"

namespace cfair {

// Names accepted in RunConfig::variants.
const std::vector<std::string>& KnownVariants();

struct RunConfig {
  // Exactly one of dataset_path or synth_json is set.
  std::string dataset_path;
  std::string synth_json;  // inline synth config, generated on the fly
  std::string lexicon_path;     // empty: bundled lexicon
  std::string adjectives_path;  // empty: bundled adjectives

  enum class ScorerKind { kNgramOnData, kModelFile, kExternal };
  ScorerKind scorer_kind = ScorerKind::kNgramOnData;
  std::string scorer_model_path;
  std::string scorer_command;
  NgramOptions ngram;

  std::vector<std::string> variants = KnownVariants();
  ClassifierHyper hyper;
  int folds = 5;
  double test_fraction = 0.2;
  std::uint64_t seed = 1;
  double threshold = 0.5;

  std::string out_dir;    // empty: no files written
  std::string cache_dir;  // empty: <out_dir>/cache

  // Throws ValidationError.
  void Validate() const;
  // Everything except the data source.
  void ValidateModelling() const;
};

// Relative paths resolve against `base_dir`. Schema is documented in the
// README. Throws ValidationError.
RunConfig RunConfigFromJson(std::string_view content,
                            const std::string& base_dir);

struct FoldMetrics {
  PrfReport prf;
  OddsReport odds;
  double ctf_sym = 0.0;
  double ctf_asym = 0.0;  // NaN when the test set yields no asymmetric pair
  std::size_t n_train = 0;
};

struct SummaryRow {
  double acc = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double tp_mean = 0.0;
  double tp_sd = 0.0;
  double tn_mean = 0.0;
  double tn_sd = 0.0;
  double ctf_asym = 0.0;
  double ctf_sym = 0.0;
};

struct VariantReport {
  std::string name;
  std::vector<FoldMetrics> folds;
  SummaryRow mean;  // over folds
};

struct ExperimentReport {
  std::vector<VariantReport> variants;
  std::vector<std::string> test_ids;
  std::vector<std::vector<std::string>> fold_train_ids;
  std::size_t n_docs = 0;
  std::size_t n_excluded_from_pairing = 0;
  std::size_t n_sym_pairs = 0;
  std::size_t n_asym_pairs = 0;

  const VariantReport* Find(std::string_view name) const;
};

struct ExperimentOptions {
  bool use_cache = true;
  std::ostream* log = nullptr;
};

// Core loop on documents already in memory. `scorer` is needed when
// clp_asy is requested; `cache_dir` empty disables on-disk caching.
ExperimentReport RunExperimentOnDocs(std::span<const Document> docs,
                                     const SgtLexicon& lexicon,
                                     std::span<const Adjective> adjectives,
                                     Scorer* scorer,
                                     const std::string& scorer_identity,
                                     const RunConfig& config,
                                     const std::string& cache_dir,
                                     std::ostream* log);

// Loads inputs, starts the scorer (failing before any training), runs, and
// writes report.json and report.csv into config.out_dir when set.
ExperimentReport RunExperiment(const RunConfig& config,
                               const ExperimentOptions& options);

// Header: model,acc,precision,recall,f1,tp_mean,tp_sd,tn_mean,tn_sd,
// ctf_asym,ctf_sym; one row of fold means per variant.
std::string ReportCsv(const ExperimentReport& report);
std::string ReportJson(const ExperimentReport& report,
                       const RunConfig& config);

// Flat {accuracy, precision, recall, f1, tp_mean, tp_sd, tn_mean, tn_sd,
// ctf_sym, ctf_asym} object used by `eval`; NaN and absent values become
// null.
std::string FairnessReportJson(const PrfReport& prf, const OddsReport& odds,
                               std::optional<double> ctf_sym,
                               std::optional<double> ctf_asym,
                               double threshold);

}  // namespace cfair

#endif  // CFAIR_EXPERIMENT_H_
