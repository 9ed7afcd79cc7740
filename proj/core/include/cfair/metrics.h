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


// Fairness and accuracy metrics: counterfactual token fairness (CTF) on
// probabilities, per-group true positive / true negative rates, and the
// usual confusion-matrix summary.

#ifndef CFAIR_METRICS_H_
#define CFAIR_METRICS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfair/classifier.h"
#include "cfair/counterfactual.h"
#include "cfair/lexicon.h"
#include "cfair/text.h"

namespace cfair {

struct CounterfactualPair {
  Document original;
  CounterfactualVariant variant;
};

struct CtfScore {
  double mean_abs_diff = 0.0;
  std::size_t n_pairs = 0;
};

// Throws ValidationError when `pairs` is empty. `lexicon` is needed only for
// masked models.
CtfScore Ctf(const TrainedModel& model, std::span<const CounterfactualPair> pairs,
             const SgtLexicon* lexicon);

// Every (original, variant) of every set is one pair; the original is
// predicted once per set.
CtfScore Ctf(const TrainedModel& model, std::span<const CounterfactualSet> sets,
             const SgtLexicon* lexicon);

// From precomputed probabilities, pairwise aligned.
CtfScore CtfFromProbs(std::span<const double> original_probs,
                      std::span<const double> counterfactual_probs);

struct GroupRates {
  std::optional<double> tp_rate;
  std::optional<double> tn_rate;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
};

// Means and population sds over groups with a defined rate; NaN when no
// group defines one.
struct OddsReport {
  std::map<EntryId, GroupRates> per_sgt;
  double tp_mean = 0.0;
  double tp_sd = 0.0;
  double tn_mean = 0.0;
  double tn_sd = 0.0;
};

// Throws ValidationError naming any document without exactly one mention or
// without a label.
OddsReport EqualityOfOdds(const TrainedModel& model,
                          std::span<const Document> test,
                          const SgtLexicon& lexicon, double threshold = 0.5);

OddsReport OddsFromPredictions(std::span<const EntryId> groups,
                               std::span<const int> labels,
                               std::span<const double> probs,
                               double threshold = 0.5);

struct PrfReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
};

PrfReport ClassificationReport(const TrainedModel& model,
                               std::span<const Document> test,
                               const SgtLexicon* lexicon,
                               double threshold = 0.5);

PrfReport PrfFromPredictions(std::span<const int> labels,
                             std::span<const double> probs,
                             double threshold = 0.5);

PrfReport PrfFromCounts(std::size_t tp, std::size_t fp, std::size_t tn,
                        std::size_t fn);

struct Adjective {
  std::string word;
  std::string polarity;  // "positive" or "negative"
};

// JSON array of {"adjective", "polarity"}. Throws ValidationError.
std::vector<Adjective> ParseAdjectives(std::string_view content);
// 10 positive + 10 negative common adjectives.
const std::vector<Adjective>& DefaultAdjectives();

// Templates with ADJ and SGT slots, e.g. "you are a ADJ SGT".
const std::vector<std::string>& DefaultSymTemplates();

// For each template, adjective and SGT, the instantiated original with every
// other SGT substituted into the slot (in lexicon order).
std::vector<CounterfactualSet> GenerateSymTemplates(
    const SgtLexicon& lexicon, std::span<const Adjective> adjectives,
    std::span<const std::string> templates = DefaultSymTemplates());

// One (original, variant) pair per variant of every set.
std::vector<CounterfactualPair> FlattenPairs(
    std::span<const CounterfactualSet> sets);

}  // namespace cfair

#endif  // CFAIR_METRICS_H_
