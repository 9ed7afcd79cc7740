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


#include <benchmark/benchmark.h>

#include "cfair/counterfactual.h"
#include "cfair/ngram.h"
#include "cfair/scoring.h"
#include "cfair/synth.h"

namespace cfair {
namespace {

std::vector<Document> Corpus(std::size_t n) {
  SynthConfig config;
  config.n_docs = n;
  return SynthDistribution(SgtLexicon::Default(), config).Generate().docs;
}

void BM_NgramTrain(benchmark::State& state) {
  const auto docs = Corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        NgramModel::Train(std::span<const Document>(docs), NgramOptions{}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NgramTrain)->Arg(2000)->Arg(20000);

void BM_NgramScoreSequence(benchmark::State& state) {
  const auto docs = Corpus(2000);
  const NgramModel model =
      NgramModel::Train(std::span<const Document>(docs), NgramOptions{});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.ScoreSequence(docs[i].tokens));
    i = (i + 1) % docs.size();
  }
}
BENCHMARK(BM_NgramScoreSequence);

// Scoring every document's full counterfactual set with a cold cache.
void BM_ScoreSetsCold(benchmark::State& state) {
  const SgtLexicon& lex = SgtLexicon::Default();
  const auto docs = Corpus(static_cast<std::size_t>(state.range(0)));
  std::vector<CounterfactualSet> sets;
  for (const Document& d : docs) {
    sets.push_back(GenerateAll(d, FindMentions(d.tokens, lex).at(0), lex));
  }
  NgramScorer scorer(
      NgramModel::Train(std::span<const Document>(docs), NgramOptions{}));
  for (auto _ : state) {
    ScoreCache cache;
    benchmark::DoNotOptimize(ScoreSets(scorer, sets, cache));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) *
                          static_cast<std::int64_t>(lex.size()));
}
BENCHMARK(BM_ScoreSetsCold)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace cfair
