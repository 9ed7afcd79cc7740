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

// Social-group-token (SGT) lexicon: the set of group terms that counterfactual
// generation substitutes, plus mention detection over tokenized text.
//
// Lexicon file format (UTF-8 JSON):
//
//   [{"term": "muslim", "category": "religion", "variants": ["muslims"]},
//    {"term": "chinese", "category": "nationality", "variants": [],
//     "plural": "chinese"}, ...]
//
// The first listed variant is the entry's plural form. The optional "plural"
// key overrides that (it may equal the term for invariant plurals). Entries
// without either pluralize by appending "s".

#ifndef CFAIR_LEXICON_H_
#define CFAIR_LEXICON_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cfair/text.h"

namespace cfair {

using EntryId = std::size_t;

struct SgtEntry {
  EntryId id = 0;
  std::string term;
  std::string category;
  std::vector<std::string> variants;
  // Surface used when substituting into a plural slot.
  std::string plural;
};

// Where a surface string lives: form 0 is the term, form k>0 is variants[k-1].
struct SurfaceRef {
  EntryId entry_id = 0;
  std::size_t form = 0;
};

struct Mention {
  EntryId entry_id = 0;
  std::size_t start = 0;
  std::size_t length = 0;
  std::string surface;

  friend bool operator==(const Mention&, const Mention&) = default;
};

class SgtLexicon {
 public:
  // Parses and validates lexicon file content. Throws ValidationError on
  // malformed JSON, empty term/category (naming the entry index) or a surface
  // shared by two entries (naming both).
  static SgtLexicon FromJson(std::string_view content);

  // Validates entries built in code; ids are reassigned to 0..n-1.
  static SgtLexicon FromEntries(std::vector<SgtEntry> entries);

  // The bundled 77-term lexicon (a documented reconstruction of a published
  // identity-term list extended with WordNet-style group terms).
  static const SgtLexicon& Default();

  std::size_t size() const { return entries_.size(); }
  const SgtEntry& entry(EntryId id) const { return entries_.at(id); }
  std::span<const SgtEntry> entries() const { return entries_; }

  // Surface string (space-joined tokens) -> location.
  const std::unordered_map<std::string, SurfaceRef>& surface_index() const {
    return surface_index_;
  }
  std::optional<SurfaceRef> Lookup(std::string_view surface) const;
  std::optional<EntryId> FindTerm(std::string_view term) const;

  // Longest surface, in tokens.
  std::size_t max_surface_tokens() const { return max_surface_tokens_; }

  // True when `surface` of entry `id` is its plural form (and that differs
  // from the term).
  bool IsPluralSurface(EntryId id, std::string_view surface) const;

  // Distinct categories in first-appearance order.
  std::vector<std::string> Categories() const;

  std::string ToJson() const;

 private:
  std::vector<SgtEntry> entries_;
  std::unordered_map<std::string, SurfaceRef> surface_index_;
  std::size_t max_surface_tokens_ = 0;
};

// Lowercases, tokenizes and re-joins with single spaces.
std::string NormalizeSurface(std::string_view surface);

// All non-overlapping mentions, longest match first at each position, left to
// right.
std::vector<Mention> FindMentions(std::span<const std::string> tokens,
                                  const SgtLexicon& lexicon);

// Documents with exactly one mention, paired with it; order preserved.
std::vector<std::pair<Document, Mention>> FilterSingleMention(
    std::span<const Document> corpus, const SgtLexicon& lexicon);

}  // namespace cfair

#endif  // CFAIR_LEXICON_H_
