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
#include <set>

#include "cfair/errors.h"
#include "cfair/metrics.h"
#include "test_util.h"

namespace cfair {
namespace {

using testing::SmallLexicon;

TEST(Prf, FromCounts) {
  const PrfReport r = PrfFromCounts(3, 2, 4, 1);
  EXPECT_DOUBLE_EQ(r.precision, 0.6);
  EXPECT_DOUBLE_EQ(r.recall, 0.75);
  EXPECT_NEAR(r.f1, 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.7);
}

TEST(Prf, DegenerateCountsAreZeroNotNan) {
  const PrfReport r = PrfFromCounts(0, 0, 5, 0);
  EXPECT_EQ(r.precision, 0.0);
  EXPECT_EQ(r.recall, 0.0);
  EXPECT_EQ(r.f1, 0.0);
  EXPECT_EQ(r.accuracy, 1.0);
}

TEST(Prf, ThresholdIsInclusive) {
  const std::vector<int> labels = {1, 0, 1, 0};
  const std::vector<double> probs = {0.5, 0.5, 0.2, 0.1};
  const PrfReport r = PrfFromPredictions(labels, probs, 0.5);
  EXPECT_EQ(r.tp, 1u);
  EXPECT_EQ(r.fp, 1u);
  EXPECT_EQ(r.fn, 1u);
  EXPECT_EQ(r.tn, 1u);
  EXPECT_THROW(PrfFromPredictions(labels, probs, 1.0), ValidationError);
}

TEST(Odds, MeanAndPopulationSdOverGroups) {
  // Group 0: 1 of 5 positives caught; group 1: 4 of 5.
  std::vector<EntryId> groups;
  std::vector<int> labels;
  std::vector<double> probs;
  for (int i = 0; i < 5; ++i) {
    groups.push_back(0);
    labels.push_back(1);
    probs.push_back(i < 1 ? 0.9 : 0.1);
    groups.push_back(1);
    labels.push_back(1);
    probs.push_back(i < 4 ? 0.9 : 0.1);
  }
  // Only group 1 has negatives.
  groups.push_back(1);
  labels.push_back(0);
  probs.push_back(0.2);
  const OddsReport r = OddsFromPredictions(groups, labels, probs);
  EXPECT_DOUBLE_EQ(r.tp_mean, 0.5);
  EXPECT_DOUBLE_EQ(r.tp_sd, 0.3);
  EXPECT_DOUBLE_EQ(r.tn_mean, 1.0);
  EXPECT_DOUBLE_EQ(r.tn_sd, 0.0);
  EXPECT_FALSE(r.per_sgt.at(0).tn_rate.has_value());
  EXPECT_EQ(r.per_sgt.at(1).n_neg, 1u);
}

TEST(Odds, NoRatesGiveNan) {
  const OddsReport r = OddsFromPredictions({}, {}, {});
  EXPECT_TRUE(std::isnan(r.tp_mean));
  EXPECT_TRUE(std::isnan(r.tn_sd));
}

TEST(Ctf, FromProbs) {
  const std::vector<double> a = {0.9, 0.5, 0.1};
  const std::vector<double> b = {0.6, 0.5, 0.4};
  const CtfScore s = CtfFromProbs(a, b);
  EXPECT_NEAR(s.mean_abs_diff, 0.2, 1e-12);
  EXPECT_EQ(s.n_pairs, 3u);
  EXPECT_THROW(CtfFromProbs({}, {}), ValidationError);
}

TEST(Ctf, PairAndSetFormsAgree) {
  const auto lex = SmallLexicon();
  TrainedModel m;
  m.config.dim = 256;
  m.params.weights.assign(256, 0.0);
  for (std::size_t i = 0; i < 256; ++i) m.params.weights[i] = std::sin(i * 1.0);
  Document d = MakeDocument("x", "they met the asian");
  const auto sets = std::vector<CounterfactualSet>{
      GenerateAll(d, FindMentions(d.tokens, lex).at(0), lex)};
  const auto pairs = FlattenPairs(sets);
  EXPECT_EQ(pairs.size(), lex.size() - 1);
  const CtfScore a = Ctf(m, sets, &lex);
  const CtfScore b = Ctf(m, pairs, &lex);
  EXPECT_EQ(a.n_pairs, b.n_pairs);
  EXPECT_DOUBLE_EQ(a.mean_abs_diff, b.mean_abs_diff);
  EXPECT_GT(a.mean_abs_diff, 0.0);
}

TEST(SymTemplates, CountsAndShape) {
  const auto lex = SmallLexicon();
  const std::vector<Adjective> adjectives = {{"kind", "positive"},
                                             {"awful", "negative"},
                                             {"smart", "positive"}};
  const std::vector<std::string> templates = {"you are a ADJ SGT"};
  const auto sets = GenerateSymTemplates(lex, adjectives, templates);
  // One original per (template, adjective, entry); 5 variants each.
  ASSERT_EQ(sets.size(), 3u * lex.size());
  std::set<std::string> ids;
  for (const auto& s : sets) {
    ids.insert(s.original.id);
    EXPECT_EQ(s.variants.size(), lex.size() - 1);
    EXPECT_EQ(FindMentions(s.original.tokens, lex).size(), 1u);
  }
  EXPECT_EQ(ids.size(), sets.size());
  EXPECT_EQ(sets[0].original.id, "sym:0:kind:muslim");
  EXPECT_EQ(JoinTokens(sets[0].original.tokens), "you are a kind muslim");
  EXPECT_EQ(FlattenPairs(sets).size(), 3u * lex.size() * (lex.size() - 1));
}

TEST(SymTemplates, BundledDefaults) {
  EXPECT_EQ(DefaultSymTemplates().size(), 2u);
  const auto& adjectives = DefaultAdjectives();
  ASSERT_FALSE(adjectives.empty());
  std::set<std::string> polarities;
  for (const auto& a : adjectives) polarities.insert(a.polarity);
  EXPECT_EQ(polarities, (std::set<std::string>{"negative", "positive"}));
  EXPECT_THROW(ParseAdjectives("[{\"adjective\":\"x\",\"polarity\":\"meh\"}]"),
               ValidationError);
}

}  // namespace
}  // namespace cfair
