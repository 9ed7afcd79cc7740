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

#ifndef CFAIR_SCORING_H_
#define CFAIR_SCORING_H_

#include <cstddef>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cfair/counterfactual.h"
#include "cfair/ngram.h"

namespace cfair {

struct ScoreRequest {
  std::string id;
  std::span<const std::string> tokens;
};

// Sentence log-likelihood provider (natural log, whole sentence).
class Scorer {
 public:
  virtual ~Scorer() = default;

  // One finite log-likelihood per request, aligned with the input. Throws
  // ScorerError on failure; no partial results.
  virtual std::vector<double> Score(std::span<const ScoreRequest> requests) = 0;
};

class NgramScorer : public Scorer {
 public:
  explicit NgramScorer(NgramModel model) : model_(std::move(model)) {}

  std::vector<double> Score(std::span<const ScoreRequest> requests) override;
  const NgramModel& model() const { return model_; }

 private:
  NgramModel model_;
};

// Persistent map from sequence hash to log-likelihood.
//
// File format: UTF-8 TSV, one row per sequence,
//   <sha256 hex of tokens joined by single spaces>\t<logprob>
// Values are written with 17 significant digits so a reload is exact.
// Lookups may run concurrently; inserts take an exclusive lock.
class ScoreCache {
 public:
  ScoreCache() = default;
  ScoreCache(const ScoreCache& other);
  ScoreCache& operator=(const ScoreCache& other);

  static std::string KeyFor(std::span<const std::string> tokens);

  // Throws ValidationError on malformed rows.
  static ScoreCache FromTsv(std::string_view content);
  // A missing file yields an empty cache.
  static ScoreCache Load(const std::string& path);

  std::optional<double> Find(const std::string& key) const;
  void Insert(const std::string& key, double logprob);
  std::size_t size() const;

  // Rows sorted by key.
  std::string ToTsv() const;
  void Save(const std::string& path) const;

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, double> entries_;
};

struct ScoredSet {
  CounterfactualSet cfset;
  double original_ll = 0.0;
  std::vector<double> variant_lls;  // aligned with cfset.variants
};

// Scores the original and every variant, consulting `cache` first and
// inserting fresh scores only once the whole set succeeded. Scorer request
// ids are the document id for the original and "<id>#<entry id>" for
// variants.
ScoredSet ScoreSet(Scorer& scorer, const CounterfactualSet& cfset,
                   ScoreCache& cache);

// Batched form: a single scorer call covers every uncached sequence.
std::vector<ScoredSet> ScoreSets(Scorer& scorer,
                                 std::span<const CounterfactualSet> cfsets,
                                 ScoreCache& cache);

}  // namespace cfair

#endif  // CFAIR_SCORING_H_
