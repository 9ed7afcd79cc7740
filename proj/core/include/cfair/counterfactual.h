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

#ifndef CFAIR_COUNTERFACTUAL_H_
#define CFAIR_COUNTERFACTUAL_H_

#include <vector>

#include "cfair/lexicon.h"
#include "cfair/text.h"

namespace cfair {

struct CounterfactualVariant {
  EntryId entry_id = 0;
  Tokens tokens;
};

// A document, its single SGT mention, and the variants obtained by replacing
// that mention. Variants follow lexicon order and never reuse the mentioned
// entry.
struct CounterfactualSet {
  Document original;
  Mention mention;
  std::vector<CounterfactualVariant> variants;
};

// Replaces the mention span with `target`'s surface. A plural source surface
// selects the target's plural form, anything else its base term. Articles are
// not adjusted. Throws PreconditionError for a span outside the document, a
// span whose text is not the mention surface, or target == mentioned entry.
CounterfactualVariant Substitute(const Document& doc, const Mention& mention,
                                 const SgtEntry& target,
                                 const SgtLexicon& lexicon);

// One variant for every lexicon entry except the mentioned one.
CounterfactualSet GenerateAll(const Document& doc, const Mention& mention,
                              const SgtLexicon& lexicon);

// Keeps the variants whose entry shares the mentioned entry's category.
CounterfactualSet RestrictSameCategory(const CounterfactualSet& cfset,
                                       const SgtLexicon& lexicon);

// A variant as a standalone document; id is "<original id>#<entry term>".
Document VariantDocument(const CounterfactualSet& cfset, std::size_t index,
                         const SgtLexicon& lexicon);

}  // namespace cfair

#endif  // CFAIR_COUNTERFACTUAL_H_
