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

#include "cfair/analysis.h"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cfair/errors.h"

namespace cfair {

using nlohmann::json;

RankResult RankOriginal(const ScoredSet& scored) {
  const auto& variants = scored.cfset.variants;
  if (scored.variant_lls.size() != variants.size()) {
    throw PreconditionError("scored set '" + scored.cfset.original.id +
                            "' has misaligned variant scores");
  }
  RankResult result;
  result.doc_id = scored.cfset.original.id;
  result.mentioned_entry = scored.cfset.mention.entry_id;
  result.total = variants.size() + 1;

  std::vector<std::pair<double, EntryId>> better;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    // Ties go to the original.
    if (scored.variant_lls[i] > scored.original_ll) {
      better.emplace_back(scored.variant_lls[i], variants[i].entry_id);
    }
  }
  std::sort(better.begin(), better.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  result.rank = better.size() + 1;
  for (const auto& [score, entry] : better) {
    result.better_ranked_entries.push_back(entry);
  }
  return result;
}

std::size_t TopDecileCutoff(std::size_t total) { return (total + 9) / 10; }

namespace {

double Median(std::vector<std::size_t> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return static_cast<double>(values[n / 2]);
  return 0.5 * (static_cast<double>(values[n / 2 - 1]) +
                static_cast<double>(values[n / 2]));
}

json OptionalToJson(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

RankAggregate AggregateRanks(std::span<const RankResult> results,
                             const SgtLexicon& lexicon) {
  if (results.empty()) throw ValidationError("no rank results to aggregate");
  RankAggregate agg;
  agg.n_docs = results.size();
  agg.total = results.front().total;
  agg.decile_cutoff = TopDecileCutoff(agg.total);

  std::size_t rank_one = 0;
  std::size_t top_decile = 0;
  std::size_t rank_two = 0;
  std::size_t rank_two_same = 0;
  std::size_t better_total = 0;
  std::size_t better_same = 0;
  double macro_sum = 0.0;
  std::size_t macro_docs = 0;
  std::map<EntryId, std::vector<std::size_t>> by_entry;

  for (const RankResult& r : results) {
    if (r.total != agg.total) {
      throw ValidationError("mixed candidate counts: '" + r.doc_id + "' has " +
                            std::to_string(r.total) + ", expected " +
                            std::to_string(agg.total));
    }
    const std::string& category = lexicon.entry(r.mentioned_entry).category;
    auto same = [&](EntryId e) { return lexicon.entry(e).category == category; };

    if (r.rank == 1) ++rank_one;
    if (r.rank <= agg.decile_cutoff) ++top_decile;
    if (r.rank == 2) {
      ++rank_two;
      if (same(r.better_ranked_entries.at(0))) ++rank_two_same;
    }
    if (r.rank >= 2 && r.rank <= agg.decile_cutoff) {
      std::size_t doc_same = 0;
      for (EntryId e : r.better_ranked_entries) doc_same += same(e) ? 1 : 0;
      better_total += r.better_ranked_entries.size();
      better_same += doc_same;
      macro_sum += static_cast<double>(doc_same) /
                   static_cast<double>(r.better_ranked_entries.size());
      ++macro_docs;
    }
    by_entry[r.mentioned_entry].push_back(r.rank);
  }

  const double n = static_cast<double>(agg.n_docs);
  agg.pct_rank_one = 100.0 * static_cast<double>(rank_one) / n;
  agg.pct_top_decile = 100.0 * static_cast<double>(top_decile) / n;
  if (rank_two > 0) {
    agg.same_cat_given_rank2 = 100.0 * static_cast<double>(rank_two_same) /
                               static_cast<double>(rank_two);
  }
  if (better_total > 0) {
    agg.same_cat_in_better_given_top_decile =
        100.0 * static_cast<double>(better_same) /
        static_cast<double>(better_total);
    agg.same_cat_in_better_given_top_decile_macro =
        100.0 * macro_sum / static_cast<double>(macro_docs);
  }

  double mean_of_means = 0.0;
  for (const auto& [entry, ranks] : by_entry) {
    double sum = 0.0;
    for (std::size_t r : ranks) sum += static_cast<double>(r);
    const double mean = sum / static_cast<double>(ranks.size());
    agg.per_sgt_mean_rank[entry] = mean;
    agg.per_sgt_median_rank[entry] = Median(ranks);
    agg.per_sgt_count[entry] = ranks.size();
    mean_of_means += mean;
  }
  mean_of_means /= static_cast<double>(by_entry.size());
  double var = 0.0;
  for (const auto& [entry, mean] : agg.per_sgt_mean_rank) {
    var += (mean - mean_of_means) * (mean - mean_of_means);
  }
  agg.sd_of_per_sgt_mean_rank =
      std::sqrt(var / static_cast<double>(by_entry.size()));
  return agg;
}

std::string RankAggregateToJson(const RankAggregate& agg,
                                const SgtLexicon& lexicon) {
  json root;
  root["n_docs"] = agg.n_docs;
  root["total"] = agg.total;
  root["decile_cutoff"] = agg.decile_cutoff;
  root["pct_rank_one"] = agg.pct_rank_one;
  root["pct_top_decile"] = agg.pct_top_decile;
  root["same_cat_given_rank2"] = OptionalToJson(agg.same_cat_given_rank2);
  root["same_cat_in_better_given_top_decile"] =
      OptionalToJson(agg.same_cat_in_better_given_top_decile);
  root["same_cat_in_better_given_top_decile_macro"] =
      OptionalToJson(agg.same_cat_in_better_given_top_decile_macro);
  json medians = json::object();
  json means = json::object();
  for (const auto& [entry, median] : agg.per_sgt_median_rank) {
    medians[lexicon.entry(entry).term] = median;
    means[lexicon.entry(entry).term] = agg.per_sgt_mean_rank.at(entry);
  }
  root["per_sgt_median_rank"] = medians;
  root["per_sgt_mean_rank"] = means;
  root["sd_of_per_sgt_mean_rank"] = agg.sd_of_per_sgt_mean_rank;
  return root.dump(2);
}

std::string PerSgtMediansCsv(const RankAggregate& agg,
                             const SgtLexicon& lexicon) {
  std::ostringstream out;
  out << "entry,median_rank,n\n";
  for (const auto& [entry, median] : agg.per_sgt_median_rank) {
    out << lexicon.entry(entry).term << ',' << median << ','
        << agg.per_sgt_count.at(entry) << '\n';
  }
  return out.str();
}

}  // namespace cfair
