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

#include "cfair/lexicon.h"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "cfair/errors.h"

namespace cfair {

namespace internal {
std::string_view BundledLexiconJson();
}  // namespace internal

using nlohmann::json;

std::string NormalizeSurface(std::string_view surface) {
  return JoinTokens(Tokenize(surface));
}

SgtLexicon SgtLexicon::FromEntries(std::vector<SgtEntry> entries) {
  if (entries.empty()) throw ValidationError("lexicon has no entries");
  SgtLexicon lexicon;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    SgtEntry& e = entries[i];
    e.id = i;
    e.term = NormalizeSurface(e.term);
    e.category = JoinTokens(Tokenize(e.category));
    if (e.term.empty()) {
      throw ValidationError("lexicon entry " + std::to_string(i) +
                            ": empty term");
    }
    if (e.category.empty()) {
      throw ValidationError("lexicon entry " + std::to_string(i) + " ('" +
                            e.term + "'): empty category");
    }
    for (auto& v : e.variants) {
      v = NormalizeSurface(v);
      if (v.empty()) {
        throw ValidationError("lexicon entry " + std::to_string(i) + " ('" +
                              e.term + "'): empty variant");
      }
    }
    if (e.plural.empty()) {
      e.plural = e.variants.empty() ? e.term + "s" : e.variants.front();
    } else {
      e.plural = NormalizeSurface(e.plural);
      if (e.plural != e.term &&
          std::find(e.variants.begin(), e.variants.end(), e.plural) ==
              e.variants.end()) {
        e.variants.push_back(e.plural);
      }
    }

    auto add_surface = [&](const std::string& surface, std::size_t form) {
      auto [it, inserted] =
          lexicon.surface_index_.emplace(surface, SurfaceRef{i, form});
      if (!inserted) {
        const SgtEntry& other = entries[it->second.entry_id];
        if (it->second.entry_id == i) {
          throw ValidationError("lexicon entry " + std::to_string(i) + " ('" +
                                e.term + "') lists surface '" + surface +
                                "' twice");
        }
        throw ValidationError("duplicate surface '" + surface +
                              "' in lexicon entries " +
                              std::to_string(other.id) + " ('" + other.term +
                              "') and " + std::to_string(i) + " ('" + e.term +
                              "')");
      }
      const auto n_tokens =
          static_cast<std::size_t>(std::count(surface.begin(), surface.end(),
                                              ' ')) + 1;
      lexicon.max_surface_tokens_ =
          std::max(lexicon.max_surface_tokens_, n_tokens);
    };
    add_surface(e.term, 0);
    for (std::size_t k = 0; k < e.variants.size(); ++k) {
      add_surface(e.variants[k], k + 1);
    }
  }
  lexicon.entries_ = std::move(entries);
  return lexicon;
}

SgtLexicon SgtLexicon::FromJson(std::string_view content) {
  json root;
  try {
    root = json::parse(content);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("lexicon is not valid JSON: ") +
                          e.what());
  }
  if (!root.is_array()) {
    throw ValidationError("lexicon must be a JSON array of entries");
  }
  std::vector<SgtEntry> entries;
  entries.reserve(root.size());
  for (std::size_t i = 0; i < root.size(); ++i) {
    const json& item = root[i];
    const std::string where = "lexicon entry " + std::to_string(i);
    if (!item.is_object()) throw ValidationError(where + ": not an object");
    SgtEntry e;
    auto string_field = [&](const char* key, bool required) -> std::string {
      auto it = item.find(key);
      if (it == item.end()) {
        if (required) throw ValidationError(where + ": missing '" + key + "'");
        return {};
      }
      if (!it->is_string()) {
        throw ValidationError(where + ": '" + key + "' must be a string");
      }
      return it->get<std::string>();
    };
    e.term = string_field("term", true);
    e.category = string_field("category", true);
    e.plural = string_field("plural", false);
    if (auto it = item.find("variants"); it != item.end()) {
      if (!it->is_array()) {
        throw ValidationError(where + ": 'variants' must be an array");
      }
      for (const json& v : *it) {
        if (!v.is_string()) {
          throw ValidationError(where + ": variants must be strings");
        }
        e.variants.push_back(v.get<std::string>());
      }
    }
    entries.push_back(std::move(e));
  }
  return FromEntries(std::move(entries));
}

const SgtLexicon& SgtLexicon::Default() {
  static const SgtLexicon lexicon = FromJson(internal::BundledLexiconJson());
  return lexicon;
}

std::optional<SurfaceRef> SgtLexicon::Lookup(std::string_view surface) const {
  auto it = surface_index_.find(std::string(surface));
  if (it == surface_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EntryId> SgtLexicon::FindTerm(std::string_view term) const {
  auto ref = Lookup(NormalizeSurface(term));
  if (!ref) return std::nullopt;
  return ref->entry_id;
}

bool SgtLexicon::IsPluralSurface(EntryId id, std::string_view surface) const {
  const SgtEntry& e = entry(id);
  return surface == e.plural && e.plural != e.term;
}

std::vector<std::string> SgtLexicon::Categories() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (std::find(out.begin(), out.end(), e.category) == out.end()) {
      out.push_back(e.category);
    }
  }
  return out;
}

std::string SgtLexicon::ToJson() const {
  json root = json::array();
  for (const auto& e : entries_) {
    json item = {{"term", e.term},
                 {"category", e.category},
                 {"variants", e.variants},
                 {"plural", e.plural}};
    root.push_back(std::move(item));
  }
  return root.dump(2);
}

std::vector<Mention> FindMentions(std::span<const std::string> tokens,
                                  const SgtLexicon& lexicon) {
  std::vector<Mention> mentions;
  const std::size_t max_len = lexicon.max_surface_tokens();
  std::string key;
  std::size_t pos = 0;
  while (pos < tokens.size()) {
    bool matched = false;
    const std::size_t longest = std::min(max_len, tokens.size() - pos);
    for (std::size_t len = longest; len >= 1; --len) {
      key = JoinTokens(tokens.subspan(pos, len));
      if (auto ref = lexicon.Lookup(key)) {
        mentions.push_back(Mention{ref->entry_id, pos, len, key});
        pos += len;
        matched = true;
        break;
      }
    }
    if (!matched) ++pos;
  }
  return mentions;
}

std::vector<std::pair<Document, Mention>> FilterSingleMention(
    std::span<const Document> corpus, const SgtLexicon& lexicon) {
  std::vector<std::pair<Document, Mention>> out;
  for (const Document& doc : corpus) {
    auto mentions = FindMentions(doc.tokens, lexicon);
    if (mentions.size() == 1) out.emplace_back(doc, std::move(mentions[0]));
  }
  return out;
}

}  // namespace cfair
