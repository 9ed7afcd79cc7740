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


// Pairing-target selection for counterfactual logit pairing.

#ifndef CFAIR_FILTER_H_
#define CFAIR_FILTER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cfair/counterfactual.h"
#include "cfair/lexicon.h"
#include "cfair/scoring.h"

namespace cfair {

enum class PairingPolicy { kAll, kNeg, kSc, kAsy };

// "all", "neg", "sc", "asy" (case-insensitive). Throws ValidationError.
PairingPolicy ParsePairingPolicy(std::string_view name);
std::string PairingPolicyName(PairingPolicy policy);

struct SymmetricSet {
  std::string doc_id;
  std::vector<std::size_t> kept;  // ascending indices into cfset.variants
  PairingPolicy policy = PairingPolicy::kAsy;
};

// Variants at least as likely as the original (ties kept).
SymmetricSet SymmetricSubset(const ScoredSet& scored);

// `scored` may be null unless policy is kAsy; kNeg needs a labelled
// original. Violations throw PreconditionError.
SymmetricSet SelectPairingTargets(const CounterfactualSet& cfset,
                                  const ScoredSet* scored,
                                  const SgtLexicon& lexicon,
                                  PairingPolicy policy);

}  // namespace cfair

#endif  // CFAIR_FILTER_H_
