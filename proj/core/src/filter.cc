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


#include "cfair/filter.h"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "cfair/errors.h"

namespace cfair {

PairingPolicy ParsePairingPolicy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "all") return PairingPolicy::kAll;
  if (lower == "neg") return PairingPolicy::kNeg;
  if (lower == "sc") return PairingPolicy::kSc;
  if (lower == "asy") return PairingPolicy::kAsy;
  throw ValidationError("unknown pairing policy '" + std::string(name) +
                        "' (expected all, neg, sc or asy)");
}

std::string PairingPolicyName(PairingPolicy policy) {
  switch (policy) {
    case PairingPolicy::kAll: return "all";
    case PairingPolicy::kNeg: return "neg";
    case PairingPolicy::kSc: return "sc";
    case PairingPolicy::kAsy: return "asy";
  }
  return "?";
}

SymmetricSet SymmetricSubset(const ScoredSet& scored) {
  if (scored.variant_lls.size() != scored.cfset.variants.size()) {
    throw PreconditionError("scored set '" + scored.cfset.original.id +
                            "' has misaligned variant scores");
  }
  SymmetricSet out{scored.cfset.original.id, {}, PairingPolicy::kAsy};
  for (std::size_t i = 0; i < scored.variant_lls.size(); ++i) {
    if (scored.variant_lls[i] >= scored.original_ll) out.kept.push_back(i);
  }
  return out;
}

SymmetricSet SelectPairingTargets(const CounterfactualSet& cfset,
                                  const ScoredSet* scored,
                                  const SgtLexicon& lexicon,
                                  PairingPolicy policy) {
  const std::size_t n = cfset.variants.size();
  SymmetricSet out{cfset.original.id, {}, policy};
  switch (policy) {
    case PairingPolicy::kAll:
      out.kept.resize(n);
      std::iota(out.kept.begin(), out.kept.end(), std::size_t{0});
      break;
    case PairingPolicy::kNeg:
      if (!cfset.original.label) {
        throw PreconditionError("policy neg needs a label for '" +
                                cfset.original.id + "'");
      }
      if (*cfset.original.label == 0) {
        out.kept.resize(n);
        std::iota(out.kept.begin(), out.kept.end(), std::size_t{0});
      }
      break;
    case PairingPolicy::kSc: {
      const std::string& category =
          lexicon.entry(cfset.mention.entry_id).category;
      for (std::size_t i = 0; i < n; ++i) {
        if (lexicon.entry(cfset.variants[i].entry_id).category == category) {
          out.kept.push_back(i);
        }
      }
      break;
    }
    case PairingPolicy::kAsy:
      if (scored == nullptr) {
        throw PreconditionError("policy asy needs likelihood scores for '" +
                                cfset.original.id + "'");
      }
      out.kept = SymmetricSubset(*scored).kept;
      break;
  }
  return out;
}

}  // namespace cfair
