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

// Context/SGT interaction study: where does each original sentence rank, by
// likelihood, among its counterfactual substitutions, and how do those ranks
// aggregate over a corpus.

#ifndef CFAIR_ANALYSIS_H_
#define CFAIR_ANALYSIS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfair/lexicon.h"
#include "cfair/scoring.h"

namespace cfair {

struct RankResult {
  std::string doc_id;
  EntryId mentioned_entry = 0;
  std::size_t rank = 1;   // 1 + #variants with strictly higher likelihood
  std::size_t total = 1;  // 1 + #variants
  // Entries scoring strictly above the original, by descending score (entry
  // id ascending among equal scores).
  std::vector<EntryId> better_ranked_entries;
};

struct RankAggregate {
  std::size_t n_docs = 0;
  std::size_t total = 0;           // candidates per document
  std::size_t decile_cutoff = 0;   // ceil(total / 10)
  double pct_rank_one = 0.0;
  double pct_top_decile = 0.0;
  // Absent when no document falls in the conditioning subset.
  std::optional<double> same_cat_given_rank2;
  std::optional<double> same_cat_in_better_given_top_decile;        // micro
  std::optional<double> same_cat_in_better_given_top_decile_macro;  // macro
  std::map<EntryId, double> per_sgt_median_rank;
  std::map<EntryId, double> per_sgt_mean_rank;
  std::map<EntryId, std::size_t> per_sgt_count;
  double sd_of_per_sgt_mean_rank = 0.0;  // population sd
};

RankResult RankOriginal(const ScoredSet& scored);

// Rank counted as "top 10%" when rank <= ceil(total / 10).
std::size_t TopDecileCutoff(std::size_t total);

// Throws ValidationError for empty input or mixed candidate counts.
RankAggregate AggregateRanks(std::span<const RankResult> results,
                             const SgtLexicon& lexicon);

std::string RankAggregateToJson(const RankAggregate& aggregate,
                                const SgtLexicon& lexicon);

// CSV "entry,median_rank,n" for plotting per-group medians.
std::string PerSgtMediansCsv(const RankAggregate& aggregate,
                             const SgtLexicon& lexicon);

}  // namespace cfair

#endif  // CFAIR_ANALYSIS_H_
