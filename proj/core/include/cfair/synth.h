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


// Seeded synthetic corpora with planted stereotypes and label bias.
//
// Every document ends in "the <sgt>" using the SGT's base term. A stereotyped
// document follows the template owned by its SGT,
//
//   <opener> <verb> <cue_k> the <sgt_k>
//
// where cue_k is unique to entry k, so its context identifies the SGT. A
// neutral document follows one of a few templates shared by all SGTs, e.g.
//
//   <subject> <verb> <object> with the <sgt>
//
// and draws the SGT uniformly. Filler pools of the two strata are disjoint.

#ifndef CFAIR_SYNTH_H_
#define CFAIR_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cfair/lexicon.h"
#include "cfair/text.h"

namespace cfair {

struct SynthConfig {
  std::size_t n_docs = 2000;
  double stereotyped_fraction = 0.3;
  double hate_rate_stereotyped = 0.6;
  double hate_rate_neutral = 0.1;
  // Sampling weight per entry for stereotyped documents; entries not listed
  // weigh 0. Empty means uniform. Neutral documents always draw uniformly.
  std::map<EntryId, double> sgt_skew;
  std::uint64_t seed = 42;

  void Validate(const SgtLexicon& lexicon) const;
};

// {"n_docs", "stereotyped_fraction", "hate_rate_stereotyped",
//  "hate_rate_neutral", "sgt_skew": {term: weight}, "seed"}; all optional.
SynthConfig SynthConfigFromJson(std::string_view content,
                                const SgtLexicon& lexicon);

struct TruthRecord {
  std::string id;
  bool stereotyped = false;
  EntryId sgt = 0;
  std::string template_id;  // "stereo-<k>" or "neutral-<j>"
  int label = 0;
};

struct SynthCorpus {
  std::vector<Document> docs;
  std::vector<TruthRecord> truth;
};

// The generating distribution, queryable as an oracle.
class SynthDistribution {
 public:
  SynthDistribution(const SgtLexicon& lexicon, SynthConfig config);

  // Throws ValidationError if a template word collides with an SGT surface
  // (so that generated documents would not have exactly one mention).
  SynthCorpus Generate() const;

  // Exact ln P(tokens) under the generator's text distribution; -infinity
  // for sequences it cannot produce.
  double LogProb(std::span<const std::string> tokens) const;

  std::size_t neutral_template_count() const;
  // Cue word owned by entry k.
  std::string CueWord(EntryId k) const;

  const SynthConfig& config() const { return config_; }

 private:
  const SgtLexicon* lexicon_;
  SynthConfig config_;
  std::vector<double> stereo_weights_;
  double stereo_weight_sum_ = 0.0;
};

std::string TruthToJsonl(const std::vector<TruthRecord>& truth,
                         const SgtLexicon& lexicon);

}  // namespace cfair

#endif  // CFAIR_SYNTH_H_
