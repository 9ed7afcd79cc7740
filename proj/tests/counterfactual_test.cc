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


#include <gtest/gtest.h>

#include <set>

#include "cfair/counterfactual.h"
#include "cfair/errors.h"
#include "test_util.h"

namespace cfair {
namespace {

using testing::SmallLexicon;
using testing::T;

CounterfactualSet SetFor(const std::string& text, const SgtLexicon& lex) {
  Document doc = MakeDocument("d", text, 1);
  const auto mentions = FindMentions(doc.tokens, lex);
  EXPECT_EQ(mentions.size(), 1u);
  return GenerateAll(doc, mentions.at(0), lex);
}

TEST(Substitute, PreservesPluralForm) {
  const auto lex = SmallLexicon();
  Document doc = MakeDocument("d", "i hate muslims");
  const Mention m = FindMentions(doc.tokens, lex).at(0);
  const auto v = Substitute(doc, m, lex.entry(*lex.FindTerm("woman")), lex);
  EXPECT_EQ(v.tokens, T({"i", "hate", "women"}));
  const auto s = Substitute(MakeDocument("e", "the muslim"),
                            Mention{0, 1, 1, "muslim"},
                            lex.entry(*lex.FindTerm("african american")), lex);
  EXPECT_EQ(s.tokens, T({"the", "african", "american"}));
}

TEST(Substitute, RejectsBadMentionAndSelfTarget) {
  const auto lex = SmallLexicon();
  Document doc = MakeDocument("d", "the muslim");
  EXPECT_THROW(Substitute(doc, Mention{0, 5, 1, "muslim"}, lex.entry(1), lex),
               PreconditionError);
  EXPECT_THROW(Substitute(doc, Mention{0, 1, 1, "jew"}, lex.entry(1), lex),
               PreconditionError);
  EXPECT_THROW(Substitute(doc, Mention{0, 1, 1, "muslim"}, lex.entry(0), lex),
               PreconditionError);
}

TEST(GenerateAll, ProducesOneVariantPerOtherEntry) {
  const auto lex = SmallLexicon();
  const auto cfset = SetFor("I hate Muslims!", lex);
  ASSERT_EQ(cfset.variants.size(), lex.size() - 1);
  std::set<EntryId> targets;
  for (const auto& v : cfset.variants) targets.insert(v.entry_id);
  EXPECT_EQ(targets.size(), lex.size() - 1);
  EXPECT_FALSE(targets.count(cfset.mention.entry_id));
  EXPECT_EQ(VariantDocument(cfset, 0, lex).id, "d#jew");
  EXPECT_EQ(VariantDocument(cfset, 0, lex).label, 1);
}

TEST(GenerateAll, DefaultLexiconGives76AndSameCategoryRestricts) {
  const SgtLexicon& lex = SgtLexicon::Default();
  const auto cfset = SetFor("I hate Muslims!", lex);
  EXPECT_EQ(cfset.variants.size(), 76u);
  const auto same = RestrictSameCategory(cfset, lex);
  std::size_t religion = 0;
  for (const SgtEntry& e : lex.entries()) religion += e.category == "religion";
  EXPECT_EQ(same.variants.size(), religion - 1);
  for (const auto& v : same.variants) {
    EXPECT_EQ(lex.entry(v.entry_id).category, "religion");
  }
}

// Substituting back to the original entry restores the original tokens,
// except where a plural lands on a number-invariant target and the way
// back can no longer tell it was plural.
TEST(SubstituteProperty, RoundTripIsIdentity) {
  const SgtLexicon& lex = SgtLexicon::Default();
  Rng rng(3);
  const std::vector<std::string> filler = {"the", "i", "really", "like", "x"};
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const SgtEntry& e = lex.entry(rng.Uniform(lex.size()));
    const bool plural = rng.Bernoulli(0.5);
    Tokens tokens = testing::RandomTokens(rng, 4, filler);
    const Tokens sgt = Tokenize(plural ? e.plural : e.term);
    const std::size_t at = rng.Uniform(tokens.size() + 1);
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at),
                  sgt.begin(), sgt.end());
    Document doc = DocumentFromTokens("p", tokens);
    const auto mentions = FindMentions(doc.tokens, lex);
    if (mentions.size() != 1 || mentions[0].entry_id != e.id) continue;
    const CounterfactualSet cfset = GenerateAll(doc, mentions[0], lex);
    for (std::size_t i = 0; i < cfset.variants.size(); ++i) {
      const SgtEntry& target = lex.entry(cfset.variants[i].entry_id);
      if (plural && target.plural == target.term) continue;
      const Document vdoc = VariantDocument(cfset, i, lex);
      const auto vm = FindMentions(vdoc.tokens, lex);
      ASSERT_EQ(vm.size(), 1u) << JoinTokens(vdoc.tokens);
      ASSERT_EQ(vm[0].entry_id, cfset.variants[i].entry_id);
      const auto back = Substitute(vdoc, vm[0], e, lex);
      EXPECT_EQ(back.tokens, doc.tokens) << JoinTokens(vdoc.tokens);
      // Tokens outside the mention are untouched.
      EXPECT_TRUE(std::equal(doc.tokens.begin(),
                             doc.tokens.begin() +
                                 static_cast<std::ptrdiff_t>(mentions[0].start),
                             vdoc.tokens.begin()));
    }
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

}  // namespace
}  // namespace cfair
