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


#include <gtest/gtest.h>

#include <cmath>

#include "cfair/classifier.h"
#include "cfair/errors.h"
#include "cfair/metrics.h"
#include "test_util.h"

namespace cfair {
namespace {

using testing::SmallLexicon;
using testing::T;

FeatureVector Sparse(std::initializer_list<std::pair<std::uint32_t, double>> e) {
  FeatureVector v;
  v.entries.assign(e.begin(), e.end());
  return v;
}

FeatureVector RandomSparse(Rng& rng, std::size_t dim) {
  std::map<std::uint32_t, double> m;
  const std::size_t nnz = 1 + rng.Uniform(6);
  for (std::size_t i = 0; i < nnz; ++i) {
    m[static_cast<std::uint32_t>(rng.Uniform(dim))] += 1.0 + rng.Uniform(2);
  }
  FeatureVector v;
  v.entries.assign(m.begin(), m.end());
  return v;
}

TEST(Objective, HandComputedValueAndGradient) {
  LinearParams p{{0.5, -1.0, 0.0, 2.0}, 0.25};
  const std::vector<LabeledFeatures> batch = {
      {Sparse({{0, 1.0}, {3, 1.0}}), 1},  // z = 2.75
      {Sparse({{1, 2.0}}), 0},            // z = -1.75
  };
  const std::vector<FeaturePair> pairs = {
      {Sparse({{0, 1.0}}), Sparse({{1, 1.0}})},  // diff = 1.5
  };
  LinearParams g;
  const LossBreakdown loss = EvaluateObjective(p, batch, pairs, 2.0, &g);
  const double bce = 0.5 * (std::log1p(std::exp(-2.75)) +
                            std::log1p(std::exp(-1.75)));
  EXPECT_NEAR(loss.bce, bce, 1e-12);
  EXPECT_NEAR(loss.clp, 1.5, 1e-12);
  EXPECT_NEAR(loss.total, bce + 3.0, 1e-12);
  const double g0 = 0.5 * (Sigmoid(2.75) - 1.0);
  const double g1 = 0.5 * Sigmoid(-1.75);
  EXPECT_NEAR(g.weights[0], g0 + 2.0, 1e-12);
  EXPECT_NEAR(g.weights[1], 2.0 * g1 - 2.0, 1e-12);
  EXPECT_NEAR(g.weights[2], 0.0, 0.0);
  EXPECT_NEAR(g.weights[3], g0, 1e-12);
  EXPECT_NEAR(g.bias, g0 + g1, 1e-12);
}

TEST(ObjectiveProperty, GradientMatchesFiniteDifferences) {
  constexpr std::size_t kDim = 64;
  constexpr double kH = 1e-5;
  Rng rng(53);
  for (int point = 0; point < 10; ++point) {
    LinearParams p;
    for (std::size_t i = 0; i < kDim; ++i) {
      p.weights.push_back(rng.UniformReal() * 2 - 1);
    }
    p.bias = rng.UniformReal() - 0.5;
    std::vector<LabeledFeatures> batch;
    for (int i = 0; i < 8; ++i) {
      batch.push_back({RandomSparse(rng, kDim), static_cast<int>(rng.Uniform(2))});
    }
    std::vector<FeaturePair> pairs;
    while (pairs.size() < 8) {
      FeaturePair fp{RandomSparse(rng, kDim), RandomSparse(rng, kDim)};
      if (std::abs(Logit(p, fp.original) - Logit(p, fp.counterfactual)) > 1e-3) {
        pairs.push_back(std::move(fp));
      }
    }
    const double lambda = 0.5 + rng.UniformReal();
    LinearParams g;
    EvaluateObjective(p, batch, pairs, lambda, &g);
    auto f = [&](const LinearParams& q) {
      return EvaluateObjective(q, batch, pairs, lambda, nullptr).total;
    };
    // Norm-wise relative error; coordinates whose gradient cancels exactly
    // only carry rounding noise and are meaningless one by one.
    double diff2 = 0.0;
    double analytic2 = 0.0;
    double numeric2 = 0.0;
    for (std::size_t i = 0; i <= kDim; ++i) {
      LinearParams plus = p;
      LinearParams minus = p;
      double* a = i < kDim ? &plus.weights[i] : &plus.bias;
      double* b = i < kDim ? &minus.weights[i] : &minus.bias;
      *a += kH;
      *b -= kH;
      const double numeric = (f(plus) - f(minus)) / (2 * kH);
      const double analytic = i < kDim ? g.weights[i] : g.bias;
      diff2 += (numeric - analytic) * (numeric - analytic);
      analytic2 += analytic * analytic;
      numeric2 += numeric * numeric;
    }
    EXPECT_LT(std::sqrt(diff2) / std::sqrt(std::max(analytic2, numeric2)),
              1e-5)
        << "point " << point;
  }
}

std::vector<TrainingExample> RandomExamples(Rng& rng, std::size_t n,
                                            std::size_t dim, bool with_pairs) {
  std::vector<TrainingExample> out(n);
  for (auto& ex : out) {
    ex.x = RandomSparse(rng, dim);
    ex.label = static_cast<int>(rng.Uniform(2));
    if (with_pairs) {
      for (int k = 0; k < 7; ++k) ex.pair_targets.push_back(RandomSparse(rng, dim));
    }
  }
  return out;
}

TEST(TrainLinear, LambdaZeroTrajectoryMatchesPlainTraining) {
  Rng rng(59);
  auto with_pairs = RandomExamples(rng, 100, 256, true);
  auto plain = with_pairs;
  for (auto& ex : plain) ex.pair_targets.clear();
  TrainOptions opts;
  opts.epochs = 5;
  opts.batch_size = 16;
  opts.seed = 7;
  std::vector<LinearParams> a;
  std::vector<LinearParams> b;
  TrainLinear(with_pairs, 256, opts,
              [&](std::size_t, const LinearParams& p) { a.push_back(p); });
  TrainLinear(plain, 256, opts,
              [&](std::size_t, const LinearParams& p) { b.push_back(p); });
  ASSERT_EQ(a.size(), 5u * 7u);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_TRUE(a[i] == b[i]) << "diverged at step " << i + 1;
  }
}

TEST(TrainLinear, DeterministicPerSeedAndSeedSensitive) {
  Rng rng(61);
  const auto examples = RandomExamples(rng, 80, 256, true);
  TrainOptions opts;
  opts.lambda = 1.0;
  opts.epochs = 3;
  const LinearParams a = TrainLinear(examples, 256, opts);
  const LinearParams b = TrainLinear(examples, 256, opts);
  EXPECT_TRUE(a == b);
  opts.seed = 2;
  EXPECT_FALSE(TrainLinear(examples, 256, opts) == a);
}

TEST(TrainLinear, RejectsBadInput) {
  TrainOptions opts;
  EXPECT_THROW(TrainLinear({}, 256, opts), PreconditionError);
  std::vector<TrainingExample> bad(1);
  bad[0].label = 3;
  EXPECT_THROW(TrainLinear(bad, 256, opts), ValidationError);
  opts.batch_size = 0;
  EXPECT_THROW(opts.Validate(), ValidationError);
  opts = TrainOptions{};
  opts.lambda = -1;
  EXPECT_THROW(opts.Validate(), ValidationError);
}

// Label depends on the SGT only: "x likes the muslim" is hateful, other
// SGTs are not. A fair model must not learn this.
std::vector<Document> BiasedDocs(const SgtLexicon& lex, std::size_t n,
                                 std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::string> verbs = {"likes", "sees", "meets", "calls"};
  std::vector<Document> docs;
  for (std::size_t i = 0; i < n; ++i) {
    const EntryId e = rng.Uniform(lex.size());
    Tokens t = {"someone", verbs[rng.Uniform(verbs.size())], "the"};
    for (auto& w : Tokenize(lex.entry(e).term)) t.push_back(w);
    docs.push_back(DocumentFromTokens("b" + std::to_string(i), t,
                                      e == 0 ? 1 : 0));
  }
  return docs;
}

ClassifierHyper SmallHyper(double lambda, bool masked) {
  ClassifierHyper h;
  h.features.dim = 1024;
  h.train.lambda = lambda;
  h.train.epochs = 30;
  h.masked = masked;
  return h;
}

TEST(Classifier, LargerLambdaShrinksCounterfactualGap) {
  const auto lex = SmallLexicon();
  const auto docs = BiasedDocs(lex, 300, 1);
  std::vector<CounterfactualSet> sets;
  for (const Document& d : docs) {
    sets.push_back(GenerateAll(d, FindMentions(d.tokens, lex).at(0), lex));
  }
  double previous = 1.0;
  double vanilla = 0.0;
  for (double lambda : {0.0, 0.3, 3.0}) {
    const TrainedModel m =
        Train(docs, lex, nullptr, PairingPolicy::kAll, SmallHyper(lambda, false));
    const double ctf = Ctf(m, sets, &lex).mean_abs_diff;
    EXPECT_LT(ctf, previous) << "lambda " << lambda;
    if (lambda == 0.0) vanilla = ctf;
    previous = ctf;
  }
  EXPECT_LT(previous, 0.25 * vanilla);
}

TEST(Classifier, MaskedModelIsExactlyCounterfactuallyFair) {
  const auto lex = SmallLexicon();
  const auto docs = BiasedDocs(lex, 200, 2);
  const TrainedModel m =
      Train(docs, lex, nullptr, PairingPolicy::kAll, SmallHyper(0.0, true));
  EXPECT_TRUE(m.provenance.masked);
  std::vector<CounterfactualSet> sets;
  for (const Document& d : docs) {
    sets.push_back(GenerateAll(d, FindMentions(d.tokens, lex).at(0), lex));
  }
  EXPECT_EQ(Ctf(m, sets, &lex).mean_abs_diff, 0.0);
  EXPECT_THROW(Predict(m, docs[0], nullptr), PreconditionError);
}

TEST(Classifier, MaskReplacesEachMentionWithOneToken) {
  const auto lex = SmallLexicon();
  EXPECT_EQ(MaskSgtTokens(T({"the", "african", "american", "and", "jews"}), lex),
            T({"the", "<sgt>", "and", "<sgt>"}));
  EXPECT_EQ(MaskSgtTokens(T({"nothing"}), lex), T({"nothing"}));
}

TEST(Classifier, AsyPolicyNeedsScorerOnlyWhenPairsAreUsed) {
  const auto lex = SmallLexicon();
  const auto docs = BiasedDocs(lex, 20, 3);
  EXPECT_THROW(Train(docs, lex, nullptr, PairingPolicy::kAsy,
                     SmallHyper(1.0, false)),
               PreconditionError);
  EXPECT_NO_THROW(Train(docs, lex, nullptr, PairingPolicy::kAsy,
                        SmallHyper(0.0, false)));
  EXPECT_NO_THROW(Train(docs, lex, nullptr, PairingPolicy::kAsy,
                        SmallHyper(1.0, true)));
}

TEST(Classifier, JsonRoundTripPreservesPredictions) {
  const auto lex = SmallLexicon();
  const auto docs = BiasedDocs(lex, 100, 4);
  ClassifierHyper h = SmallHyper(0.5, false);
  h.features.hash_seed = 9;
  const TrainedModel m = Train(docs, lex, nullptr, PairingPolicy::kSc, h);
  const TrainedModel back = TrainedModel::FromJson(m.ToJson());
  EXPECT_TRUE(back.params == m.params);
  EXPECT_TRUE(back.config == m.config);
  EXPECT_EQ(back.provenance.policy, "sc");
  EXPECT_EQ(back.provenance.lambda, 0.5);
  for (const Document& d : docs) {
    EXPECT_EQ(Predict(back, d, &lex).logit, Predict(m, d, &lex).logit);
  }
  EXPECT_THROW(TrainedModel::FromJson("{\"format_version\": 99}"),
               ValidationError);
}

TEST(Classifier, TrainingRequiresLabels) {
  const auto lex = SmallLexicon();
  std::vector<Document> docs = {MakeDocument("u", "the jew")};
  EXPECT_THROW(Train(docs, lex, nullptr, PairingPolicy::kAll,
                     SmallHyper(0.0, false)),
               ValidationError);
}

}  // namespace
}  // namespace cfair
