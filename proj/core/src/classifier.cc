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


#include "cfair/classifier.h"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "cfair/counterfactual.h"
#include "cfair/errors.h"
#include "cfair/random.h"

namespace cfair {

using nlohmann::json;

namespace {

constexpr std::uint64_t kShuffleStream = 1;
constexpr std::uint64_t kPairStream = 2;

double Sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// ln(1 + e^z) without overflow.
double Softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

void CheckLabel(int label, const std::string& where) {
  if (label != 0 && label != 1) {
    throw ValidationError("non-binary label for " + where);
  }
}

}  // namespace

Tokens MaskSgtTokens(std::span<const std::string> tokens,
                     const SgtLexicon& lexicon) {
  const std::vector<Mention> mentions = FindMentions(tokens, lexicon);
  Tokens out;
  out.reserve(tokens.size());
  std::size_t i = 0;
  for (const Mention& m : mentions) {
    out.insert(out.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i),
               tokens.begin() + static_cast<std::ptrdiff_t>(m.start));
    out.emplace_back(kSgtMaskToken);
    i = m.start + m.length;
  }
  out.insert(out.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i),
             tokens.end());
  return out;
}

Document MaskSgts(const Document& doc, const SgtLexicon& lexicon) {
  Document out = doc;
  out.tokens = MaskSgtTokens(doc.tokens, lexicon);
  return out;
}

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double Logit(const LinearParams& params, const FeatureVector& x) {
  double z = params.bias;
  for (const auto& [index, count] : x.entries) {
    z += params.weights[index] * count;
  }
  return z;
}

LossBreakdown EvaluateObjective(const LinearParams& params,
                                std::span<const LabeledFeatures> batch,
                                std::span<const FeaturePair> pairs,
                                double lambda, LinearParams* grad) {
  if (lambda < 0.0) throw PreconditionError("lambda must be >= 0");
  if (grad != nullptr) {
    grad->weights.assign(params.weights.size(), 0.0);
    grad->bias = 0.0;
  }
  LossBreakdown loss;
  if (!batch.empty()) {
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (const LabeledFeatures& ex : batch) {
      const double z = Logit(params, ex.x);
      loss.bce += Softplus(z) - ex.label * z;
      if (grad != nullptr) {
        const double g = (Sigmoid(z) - ex.label) * inv;
        for (const auto& [index, count] : ex.x.entries) {
          grad->weights[index] += g * count;
        }
        grad->bias += g;
      }
    }
    loss.bce *= inv;
  }
  if (!pairs.empty()) {
    const double inv = 1.0 / static_cast<double>(pairs.size());
    for (const FeaturePair& pair : pairs) {
      const double diff =
          Logit(params, pair.original) - Logit(params, pair.counterfactual);
      loss.clp += std::abs(diff);
      if (grad != nullptr && lambda != 0.0) {
        const double g = lambda * Sign(diff) * inv;
        for (const auto& [index, count] : pair.original.entries) {
          grad->weights[index] += g * count;
        }
        for (const auto& [index, count] : pair.counterfactual.entries) {
          grad->weights[index] -= g * count;
        }
      }
    }
    loss.clp *= inv;
  }
  loss.total = loss.bce + lambda * loss.clp;
  return loss;
}

void TrainOptions::Validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("lambda must be a finite value >= 0");
  }
  if (epochs < 1) throw ValidationError("epochs must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("learning rate must be positive");
  }
  if (batch_size < 1) throw ValidationError("batch size must be >= 1");
  if (pairs_per_example < 1) {
    throw ValidationError("pairs per example must be >= 1");
  }
}

LinearParams TrainLinear(std::span<const TrainingExample> examples,
                         std::size_t dim, const TrainOptions& options,
                         const StepObserver& observer) {
  options.Validate();
  if (examples.empty()) throw PreconditionError("no training examples");
  for (const TrainingExample& ex : examples) {
    CheckLabel(ex.label, "training example");
  }
  LinearParams params;
  params.weights.assign(dim, 0.0);

  Rng shuffle_rng(MixSeed(options.seed, kShuffleStream));
  Rng pair_rng(MixSeed(options.seed, kPairStream));
  const bool use_pairs = options.lambda != 0.0;

  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<double> grad(dim, 0.0);
  std::vector<char> touched_flag(dim, 0);
  std::vector<std::uint32_t> touched;
  auto add = [&](const FeatureVector& x, double g) {
    for (const auto& [index, count] : x.entries) {
      if (!touched_flag[index]) {
        touched_flag[index] = 1;
        touched.push_back(index);
      }
      grad[index] += g * count;
    }
  };

  struct SampledPair {
    std::size_t example;
    std::size_t target;
  };
  std::vector<SampledPair> sampled;
  std::size_t step = 0;

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    shuffle_rng.Shuffle(order);
    for (std::size_t begin = 0; begin < order.size();
         begin += options.batch_size) {
      const std::size_t end =
          std::min(order.size(), begin + options.batch_size);
      const double inv_batch = 1.0 / static_cast<double>(end - begin);
      double bias_grad = 0.0;

      sampled.clear();
      if (use_pairs) {
        for (std::size_t b = begin; b < end; ++b) {
          const std::size_t n = examples[order[b]].pair_targets.size();
          if (n == 0) continue;
          const std::size_t k = std::min(n, options.pairs_per_example);
          for (std::size_t t : pair_rng.SampleWithoutReplacement(n, k)) {
            sampled.push_back({order[b], t});
          }
        }
      }

      // Logits use the parameters from before this step.
      std::vector<double> batch_logits(end - begin);
      for (std::size_t b = begin; b < end; ++b) {
        batch_logits[b - begin] = Logit(params, examples[order[b]].x);
      }
      std::vector<double> pair_signs(sampled.size());
      for (std::size_t p = 0; p < sampled.size(); ++p) {
        const TrainingExample& ex = examples[sampled[p].example];
        pair_signs[p] = Sign(Logit(params, ex.x) -
                             Logit(params, ex.pair_targets[sampled[p].target]));
      }

      for (std::size_t b = begin; b < end; ++b) {
        const TrainingExample& ex = examples[order[b]];
        const double g = (Sigmoid(batch_logits[b - begin]) - ex.label) *
                         inv_batch;
        add(ex.x, g);
        bias_grad += g;
      }
      if (!sampled.empty()) {
        const double scale =
            options.lambda / static_cast<double>(sampled.size());
        for (std::size_t p = 0; p < sampled.size(); ++p) {
          if (pair_signs[p] == 0.0) continue;
          const TrainingExample& ex = examples[sampled[p].example];
          const double g = scale * pair_signs[p];
          add(ex.x, g);
          add(ex.pair_targets[sampled[p].target], -g);
        }
      }

      for (std::uint32_t index : touched) {
        params.weights[index] -= options.learning_rate * grad[index];
        grad[index] = 0.0;
        touched_flag[index] = 0;
      }
      touched.clear();
      params.bias -= options.learning_rate * bias_grad;
      ++step;
      if (observer) observer(step, params);
    }
  }
  return params;
}

std::string TrainedModel::ToJson() const {
  json root;
  root["format_version"] = 1;
  root["feature_dim"] = config.dim;
  root["hash_seed"] = config.hash_seed;
  root["ngram_orders"] = config.ngram_orders;
  root["weights"] = params.weights;
  root["bias"] = params.bias;
  root["provenance"] = {{"policy", provenance.policy},
                        {"lambda", provenance.lambda},
                        {"epochs", provenance.epochs},
                        {"learning_rate", provenance.learning_rate},
                        {"batch_size", provenance.batch_size},
                        {"pairs_per_example", provenance.pairs_per_example},
                        {"seed", provenance.seed},
                        {"masked", provenance.masked}};
  return root.dump();
}

TrainedModel TrainedModel::FromJson(std::string_view content) {
  TrainedModel model;
  try {
    const json root = json::parse(content);
    if (root.at("format_version").get<int>() != 1) {
      throw ValidationError("unsupported classifier format_version");
    }
    model.config.dim = root.at("feature_dim").get<std::size_t>();
    model.config.hash_seed = root.at("hash_seed").get<std::uint64_t>();
    model.config.ngram_orders = root.at("ngram_orders").get<std::vector<int>>();
    model.params.weights = root.at("weights").get<std::vector<double>>();
    model.params.bias = root.at("bias").get<double>();
    const json& p = root.at("provenance");
    model.provenance.policy = p.at("policy").get<std::string>();
    model.provenance.lambda = p.at("lambda").get<double>();
    model.provenance.epochs = p.at("epochs").get<int>();
    model.provenance.learning_rate = p.at("learning_rate").get<double>();
    model.provenance.batch_size = p.at("batch_size").get<std::size_t>();
    model.provenance.pairs_per_example =
        p.at("pairs_per_example").get<std::size_t>();
    model.provenance.seed = p.at("seed").get<std::uint64_t>();
    model.provenance.masked = p.at("masked").get<bool>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid classifier model: ") + e.what());
  }
  model.config.Validate();
  if (model.params.weights.size() != model.config.dim) {
    throw ValidationError("classifier weights do not match feature_dim");
  }
  if (!std::isfinite(model.params.bias) ||
      !std::all_of(model.params.weights.begin(), model.params.weights.end(),
                   [](double w) { return std::isfinite(w); })) {
    throw ValidationError("classifier parameters are not finite");
  }
  return model;
}

Prediction Predict(const TrainedModel& model,
                   std::span<const std::string> tokens,
                   const SgtLexicon* lexicon) {
  Prediction out;
  if (model.provenance.masked) {
    if (lexicon == nullptr) {
      throw PreconditionError("masked model needs a lexicon to predict");
    }
    const Tokens masked = MaskSgtTokens(tokens, *lexicon);
    out.logit = Logit(model.params, Featurize(masked, model.config));
  } else {
    out.logit = Logit(model.params, Featurize(tokens, model.config));
  }
  out.prob = Sigmoid(out.logit);
  return out;
}

Prediction Predict(const TrainedModel& model, const Document& doc,
                   const SgtLexicon* lexicon) {
  return Predict(model, doc.tokens, lexicon);
}

std::vector<std::vector<Tokens>> BuildPairTargets(
    std::span<const Document> docs, const SgtLexicon& lexicon,
    PairingPolicy policy, Scorer* scorer, ScoreCache* cache) {
  if (policy == PairingPolicy::kAsy && scorer == nullptr) {
    throw PreconditionError("asy pairing needs a likelihood scorer");
  }
  std::vector<std::size_t> doc_index;
  std::vector<CounterfactualSet> cfsets;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const std::vector<Mention> mentions = FindMentions(docs[i].tokens, lexicon);
    if (mentions.size() != 1) continue;
    doc_index.push_back(i);
    cfsets.push_back(GenerateAll(docs[i], mentions.front(), lexicon));
  }
  std::vector<ScoredSet> scored;
  if (policy == PairingPolicy::kAsy) {
    ScoreCache local;
    scored = ScoreSets(*scorer, cfsets, cache != nullptr ? *cache : local);
  }
  std::vector<std::vector<Tokens>> targets(docs.size());
  for (std::size_t s = 0; s < cfsets.size(); ++s) {
    const SymmetricSet kept = SelectPairingTargets(
        cfsets[s], scored.empty() ? nullptr : &scored[s], lexicon, policy);
    auto& out = targets[doc_index[s]];
    for (std::size_t v : kept.kept) {
      out.push_back(std::move(cfsets[s].variants[v].tokens));
    }
  }
  return targets;
}

TrainedModel TrainClassifier(std::span<const Document> docs,
                             std::span<const std::vector<Tokens>> pair_targets,
                             const SgtLexicon& lexicon, PairingPolicy policy,
                             const ClassifierHyper& hyper) {
  hyper.features.Validate();
  hyper.train.Validate();
  if (docs.empty()) throw ValidationError("training set is empty");
  if (!pair_targets.empty() && pair_targets.size() != docs.size()) {
    throw PreconditionError("pair targets are not aligned with documents");
  }
  std::vector<TrainingExample> examples(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!docs[i].label) {
      throw ValidationError("document '" + docs[i].id + "' has no label");
    }
    CheckLabel(*docs[i].label, "document '" + docs[i].id + "'");
    examples[i].label = *docs[i].label;
    if (hyper.masked) {
      examples[i].x = Featurize(MaskSgtTokens(docs[i].tokens, lexicon),
                                hyper.features);
      continue;
    }
    examples[i].x = Featurize(docs[i].tokens, hyper.features);
    if (!pair_targets.empty()) {
      for (const Tokens& t : pair_targets[i]) {
        examples[i].pair_targets.push_back(Featurize(t, hyper.features));
      }
    }
  }
  TrainOptions options = hyper.train;
  if (hyper.masked) options.lambda = 0.0;

  TrainedModel model;
  model.config = hyper.features;
  model.params = TrainLinear(examples, hyper.features.dim, options);
  model.provenance = Provenance{PairingPolicyName(policy),
                                options.lambda,
                                options.epochs,
                                options.learning_rate,
                                options.batch_size,
                                options.pairs_per_example,
                                options.seed,
                                hyper.masked};
  return model;
}

TrainedModel Train(std::span<const Document> docs, const SgtLexicon& lexicon,
                   Scorer* scorer, PairingPolicy policy,
                   const ClassifierHyper& hyper, ScoreCache* cache) {
  const bool needs_pairs = !hyper.masked && hyper.train.lambda != 0.0;
  if (needs_pairs && policy == PairingPolicy::kAsy && scorer == nullptr) {
    throw PreconditionError("asy pairing needs a likelihood scorer");
  }
  std::vector<std::vector<Tokens>> targets;
  if (needs_pairs) {
    targets = BuildPairTargets(docs, lexicon, policy, scorer, cache);
  }
  return TrainClassifier(docs, targets, lexicon, policy, hyper);
}

}  // namespace cfair
