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


// Linear hate classifier over hashed n-grams, trained by mini-batch gradient
// descent on binary cross-entropy plus a counterfactual logit pairing term:
//
//   total = mean_batch BCE + lambda * mean_pairs |g(x) - g(x')|
//
// with g the logit. The absolute value uses sign(0) = 0.

#ifndef CFAIR_CLASSIFIER_H_
#define CFAIR_CLASSIFIER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfair/features.h"
#include "cfair/filter.h"
#include "cfair/lexicon.h"
#include "cfair/scoring.h"
#include "cfair/text.h"

namespace cfair {

// Replaces every SGT mention. Not producible by the tokenizer, since '<' and
// '>' are stripped from token edges.
inline constexpr std::string_view kSgtMaskToken = "<sgt>";

Tokens MaskSgtTokens(std::span<const std::string> tokens,
                     const SgtLexicon& lexicon);
Document MaskSgts(const Document& doc, const SgtLexicon& lexicon);

struct LinearParams {
  std::vector<double> weights;
  double bias = 0.0;

  friend bool operator==(const LinearParams&, const LinearParams&) = default;
};

struct LabeledFeatures {
  FeatureVector x;
  int label = 0;
};

struct FeaturePair {
  FeatureVector original;
  FeatureVector counterfactual;
};

struct LossBreakdown {
  double bce = 0.0;
  double clp = 0.0;
  double total = 0.0;
};

double Sigmoid(double z);
double Logit(const LinearParams& params, const FeatureVector& x);

// Loss over an explicit batch and pair list; an empty batch contributes
// bce = 0 and no pairs contribute clp = 0. When `grad` is non-null it
// receives the (sub)gradient, sized like `params`.
LossBreakdown EvaluateObjective(const LinearParams& params,
                                std::span<const LabeledFeatures> batch,
                                std::span<const FeaturePair> pairs,
                                double lambda, LinearParams* grad);

struct TrainOptions {
  double lambda = 0.0;
  int epochs = 20;
  double learning_rate = 0.5;
  std::size_t batch_size = 32;
  std::uint64_t seed = 1;
  std::size_t pairs_per_example = 5;

  void Validate() const;
};

struct TrainingExample {
  FeatureVector x;
  int label = 0;
  std::vector<FeatureVector> pair_targets;
};

// Called after every parameter update with the 1-based step number.
using StepObserver =
    std::function<void(std::size_t step, const LinearParams& params)>;

// Zero-initialized descent. Shuffling and pair sampling use independent
// streams derived from options.seed; with lambda == 0 pairs are never
// sampled, so the trajectory equals training on the bare examples.
LinearParams TrainLinear(std::span<const TrainingExample> examples,
                         std::size_t dim, const TrainOptions& options,
                         const StepObserver& observer = {});

struct Provenance {
  std::string policy = "all";
  double lambda = 0.0;
  int epochs = 0;
  double learning_rate = 0.0;
  std::size_t batch_size = 0;
  std::size_t pairs_per_example = 0;
  std::uint64_t seed = 0;
  bool masked = false;
};

struct TrainedModel {
  FeatureConfig config;
  LinearParams params;
  Provenance provenance;

  std::string ToJson() const;
  // Throws ValidationError on schema violations or non-finite parameters.
  static TrainedModel FromJson(std::string_view content);
};

struct Prediction {
  double logit = 0.0;
  double prob = 0.5;
};

// Masked models mask the input themselves and need `lexicon` (throws
// PreconditionError when it is null).
Prediction Predict(const TrainedModel& model,
                   std::span<const std::string> tokens,
                   const SgtLexicon* lexicon);
Prediction Predict(const TrainedModel& model, const Document& doc,
                   const SgtLexicon* lexicon);

struct ClassifierHyper {
  TrainOptions train;
  FeatureConfig features;
  bool masked = false;
};

// Token sequences of the kept counterfactuals for each document, in document
// order. Documents without exactly one mention get no targets. `scorer` is
// only consulted for PairingPolicy::kAsy (throws PreconditionError when
// null); `cache` may be null.
std::vector<std::vector<Tokens>> BuildPairTargets(
    std::span<const Document> docs, const SgtLexicon& lexicon,
    PairingPolicy policy, Scorer* scorer, ScoreCache* cache);

// Labels must be 0/1 (ValidationError otherwise). `pair_targets` is either
// empty or aligned with `docs`; it is ignored for masked models.
TrainedModel TrainClassifier(std::span<const Document> docs,
                             std::span<const std::vector<Tokens>> pair_targets,
                             const SgtLexicon& lexicon, PairingPolicy policy,
                             const ClassifierHyper& hyper);

// BuildPairTargets followed by TrainClassifier. A scorer is required only
// for asy pairing with lambda > 0 on an unmasked model.
TrainedModel Train(std::span<const Document> docs, const SgtLexicon& lexicon,
                   Scorer* scorer, PairingPolicy policy,
                   const ClassifierHyper& hyper, ScoreCache* cache = nullptr);

}  // namespace cfair

#endif  // CFAIR_CLASSIFIER_H_
