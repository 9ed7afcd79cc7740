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


#include "cfair/metrics.h"

#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

#include "cfair/errors.h"

namespace cfair {

namespace internal {
std::string_view BundledAdjectivesJson();
}  // namespace internal

using nlohmann::json;

namespace {

// Population mean and sd; NaN for an empty sample.
std::pair<double, double> MeanSd(const std::vector<double>& values) {
  if (values.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

}  // namespace

CtfScore CtfFromProbs(std::span<const double> original_probs,
                      std::span<const double> counterfactual_probs) {
  if (original_probs.size() != counterfactual_probs.size()) {
    throw PreconditionError("CTF probability lists differ in length");
  }
  if (original_probs.empty()) {
    throw ValidationError("CTF needs at least one pair");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < original_probs.size(); ++i) {
    sum += std::abs(original_probs[i] - counterfactual_probs[i]);
  }
  return {sum / static_cast<double>(original_probs.size()),
          original_probs.size()};
}

CtfScore Ctf(const TrainedModel& model, std::span<const CounterfactualPair> pairs,
             const SgtLexicon* lexicon) {
  std::vector<double> a;
  std::vector<double> b;
  a.reserve(pairs.size());
  b.reserve(pairs.size());
  for (const CounterfactualPair& pair : pairs) {
    a.push_back(Predict(model, pair.original.tokens, lexicon).prob);
    b.push_back(Predict(model, pair.variant.tokens, lexicon).prob);
  }
  return CtfFromProbs(a, b);
}

CtfScore Ctf(const TrainedModel& model, std::span<const CounterfactualSet> sets,
             const SgtLexicon* lexicon) {
  std::vector<double> a;
  std::vector<double> b;
  for (const CounterfactualSet& set : sets) {
    const double p = Predict(model, set.original.tokens, lexicon).prob;
    for (const CounterfactualVariant& v : set.variants) {
      a.push_back(p);
      b.push_back(Predict(model, v.tokens, lexicon).prob);
    }
  }
  return CtfFromProbs(a, b);
}

OddsReport OddsFromPredictions(std::span<const EntryId> groups,
                               std::span<const int> labels,
                               std::span<const double> probs,
                               double threshold) {
  if (groups.size() != labels.size() || labels.size() != probs.size()) {
    throw PreconditionError("odds inputs differ in length");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ValidationError("threshold must lie in (0, 1)");
  }
  struct Counts {
    std::size_t tp = 0, fn = 0, tn = 0, fp = 0;
  };
  std::map<EntryId, Counts> counts;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const bool predicted = probs[i] >= threshold;
    Counts& c = counts[groups[i]];
    if (labels[i] == 1) {
      predicted ? ++c.tp : ++c.fn;
    } else {
      predicted ? ++c.fp : ++c.tn;
    }
  }
  OddsReport report;
  std::vector<double> tps;
  std::vector<double> tns;
  for (const auto& [entry, c] : counts) {
    GroupRates rates;
    rates.n_pos = c.tp + c.fn;
    rates.n_neg = c.tn + c.fp;
    if (rates.n_pos > 0) {
      rates.tp_rate =
          static_cast<double>(c.tp) / static_cast<double>(rates.n_pos);
      tps.push_back(*rates.tp_rate);
    }
    if (rates.n_neg > 0) {
      rates.tn_rate =
          static_cast<double>(c.tn) / static_cast<double>(rates.n_neg);
      tns.push_back(*rates.tn_rate);
    }
    report.per_sgt[entry] = rates;
  }
  std::tie(report.tp_mean, report.tp_sd) = MeanSd(tps);
  std::tie(report.tn_mean, report.tn_sd) = MeanSd(tns);
  return report;
}

OddsReport EqualityOfOdds(const TrainedModel& model,
                          std::span<const Document> test,
                          const SgtLexicon& lexicon, double threshold) {
  std::vector<EntryId> groups;
  std::vector<int> labels;
  std::vector<double> probs;
  for (const Document& doc : test) {
    const std::vector<Mention> mentions = FindMentions(doc.tokens, lexicon);
    if (mentions.size() != 1) {
      throw ValidationError("document '" + doc.id + "' has " +
                            std::to_string(mentions.size()) +
                            " SGT mentions, expected 1");
    }
    if (!doc.label) {
      throw ValidationError("document '" + doc.id + "' has no label");
    }
    groups.push_back(mentions.front().entry_id);
    labels.push_back(*doc.label);
    probs.push_back(Predict(model, doc, &lexicon).prob);
  }
  return OddsFromPredictions(groups, labels, probs, threshold);
}

PrfReport PrfFromCounts(std::size_t tp, std::size_t fp, std::size_t tn,
                        std::size_t fn) {
  PrfReport r;
  r.tp = tp;
  r.fp = fp;
  r.tn = tn;
  r.fn = fn;
  const double total = static_cast<double>(tp + fp + tn + fn);
  r.accuracy = total > 0 ? static_cast<double>(tp + tn) / total : 0.0;
  r.precision =
      tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  r.recall =
      tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  r.f1 = r.precision + r.recall > 0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

PrfReport PrfFromPredictions(std::span<const int> labels,
                             std::span<const double> probs, double threshold) {
  if (labels.size() != probs.size()) {
    throw PreconditionError("label and probability lists differ in length");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ValidationError("threshold must lie in (0, 1)");
  }
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw ValidationError("non-binary label at position " +
                            std::to_string(i));
    }
    const bool predicted = probs[i] >= threshold;
    if (labels[i] == 1) {
      predicted ? ++tp : ++fn;
    } else {
      predicted ? ++fp : ++tn;
    }
  }
  return PrfFromCounts(tp, fp, tn, fn);
}

PrfReport ClassificationReport(const TrainedModel& model,
                               std::span<const Document> test,
                               const SgtLexicon* lexicon, double threshold) {
  std::vector<int> labels;
  std::vector<double> probs;
  for (const Document& doc : test) {
    if (!doc.label) {
      throw ValidationError("document '" + doc.id + "' has no label");
    }
    labels.push_back(*doc.label);
    probs.push_back(Predict(model, doc, lexicon).prob);
  }
  return PrfFromPredictions(labels, probs, threshold);
}

std::vector<Adjective> ParseAdjectives(std::string_view content) {
  std::vector<Adjective> out;
  try {
    const json root = json::parse(content);
    if (!root.is_array() || root.empty()) {
      throw ValidationError("adjective list must be a nonempty JSON array");
    }
    for (std::size_t i = 0; i < root.size(); ++i) {
      Adjective adj{root[i].at("adjective").get<std::string>(),
                    root[i].at("polarity").get<std::string>()};
      if (Tokenize(adj.word).empty()) {
        throw ValidationError("adjective " + std::to_string(i) + " is empty");
      }
      if (adj.polarity != "positive" && adj.polarity != "negative") {
        throw ValidationError("adjective " + std::to_string(i) +
                              ": polarity must be positive or negative");
      }
      out.push_back(std::move(adj));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid adjective list: ") + e.what());
  }
  return out;
}

const std::vector<Adjective>& DefaultAdjectives() {
  static const std::vector<Adjective> adjectives =
      ParseAdjectives(internal::BundledAdjectivesJson());
  return adjectives;
}

const std::vector<std::string>& DefaultSymTemplates() {
  static const std::vector<std::string> templates = {"you are a ADJ SGT",
                                                     "being SGT is ADJ"};
  return templates;
}

std::vector<CounterfactualSet> GenerateSymTemplates(
    const SgtLexicon& lexicon, std::span<const Adjective> adjectives,
    std::span<const std::string> templates) {
  if (lexicon.size() == 0 || adjectives.empty() || templates.empty()) {
    throw ValidationError("SYM templates need SGTs, adjectives and templates");
  }
  std::vector<CounterfactualSet> sets;
  for (std::size_t t = 0; t < templates.size(); ++t) {
    // Slots are matched on the raw template before lowercasing.
    std::vector<std::string> slots;
    for (std::size_t pos = 0; pos < templates[t].size();) {
      const std::size_t end = templates[t].find(' ', pos);
      const std::size_t stop = end == std::string::npos ? templates[t].size() : end;
      if (stop > pos) slots.push_back(templates[t].substr(pos, stop - pos));
      pos = stop + 1;
    }
    for (const Adjective& adj : adjectives) {
      const Tokens adj_tokens = Tokenize(adj.word);
      for (const SgtEntry& entry : lexicon.entries()) {
        const Tokens sgt_tokens = Tokenize(entry.term);
        Tokens tokens;
        Mention mention{entry.id, 0, sgt_tokens.size(), entry.term};
        for (const std::string& slot : slots) {
          if (slot == "SGT") {
            mention.start = tokens.size();
            tokens.insert(tokens.end(), sgt_tokens.begin(), sgt_tokens.end());
          } else if (slot == "ADJ") {
            tokens.insert(tokens.end(), adj_tokens.begin(), adj_tokens.end());
          } else {
            for (std::string& tok : Tokenize(slot)) tokens.push_back(tok);
          }
        }
        Document original = DocumentFromTokens(
            "sym:" + std::to_string(t) + ":" + adj.word + ":" + entry.term,
            std::move(tokens));
        sets.push_back(GenerateAll(original, mention, lexicon));
      }
    }
  }
  return sets;
}

std::vector<CounterfactualPair> FlattenPairs(
    std::span<const CounterfactualSet> sets) {
  std::vector<CounterfactualPair> pairs;
  for (const CounterfactualSet& set : sets) {
    for (const CounterfactualVariant& v : set.variants) {
      pairs.push_back({set.original, v});
    }
  }
  return pairs;
}

}  // namespace cfair
