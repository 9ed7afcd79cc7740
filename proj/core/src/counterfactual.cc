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

#include "cfair/counterfactual.h"

#include <span>

#include "cfair/errors.h"

namespace cfair {

CounterfactualVariant Substitute(const Document& doc, const Mention& mention,
                                 const SgtEntry& target,
                                 const SgtLexicon& lexicon) {
  if (mention.length == 0 || mention.start > doc.tokens.size() ||
      mention.length > doc.tokens.size() - mention.start) {
    throw PreconditionError("mention span [" + std::to_string(mention.start) +
                            ", +" + std::to_string(mention.length) +
                            ") outside document '" + doc.id + "'");
  }
  const std::span<const std::string> span(doc.tokens.data() + mention.start,
                                          mention.length);
  if (JoinTokens(span) != mention.surface) {
    throw PreconditionError("mention surface '" + mention.surface +
                            "' does not match document '" + doc.id + "'");
  }
  if (target.id == mention.entry_id) {
    throw PreconditionError("substitution target equals mentioned entry '" +
                            target.term + "'");
  }
  const bool plural = lexicon.IsPluralSurface(mention.entry_id, mention.surface);
  const Tokens replacement = Tokenize(plural ? target.plural : target.term);

  CounterfactualVariant variant;
  variant.entry_id = target.id;
  variant.tokens.reserve(doc.tokens.size() - mention.length +
                         replacement.size());
  const auto begin = doc.tokens.begin();
  variant.tokens.insert(variant.tokens.end(), begin,
                        begin + static_cast<std::ptrdiff_t>(mention.start));
  variant.tokens.insert(variant.tokens.end(), replacement.begin(),
                        replacement.end());
  variant.tokens.insert(
      variant.tokens.end(),
      begin + static_cast<std::ptrdiff_t>(mention.start + mention.length),
      doc.tokens.end());
  return variant;
}

CounterfactualSet GenerateAll(const Document& doc, const Mention& mention,
                              const SgtLexicon& lexicon) {
  CounterfactualSet cfset;
  cfset.original = doc;
  cfset.mention = mention;
  cfset.variants.reserve(lexicon.size() - 1);
  for (const SgtEntry& target : lexicon.entries()) {
    if (target.id == mention.entry_id) continue;
    cfset.variants.push_back(Substitute(doc, mention, target, lexicon));
  }
  return cfset;
}

CounterfactualSet RestrictSameCategory(const CounterfactualSet& cfset,
                                       const SgtLexicon& lexicon) {
  CounterfactualSet out;
  out.original = cfset.original;
  out.mention = cfset.mention;
  const std::string& category = lexicon.entry(cfset.mention.entry_id).category;
  for (const auto& v : cfset.variants) {
    if (lexicon.entry(v.entry_id).category == category) {
      out.variants.push_back(v);
    }
  }
  return out;
}

Document VariantDocument(const CounterfactualSet& cfset, std::size_t index,
                         const SgtLexicon& lexicon) {
  const CounterfactualVariant& v = cfset.variants.at(index);
  return DocumentFromTokens(
      cfset.original.id + "#" + lexicon.entry(v.entry_id).term, v.tokens,
      cfset.original.label);
}

}  // namespace cfair
