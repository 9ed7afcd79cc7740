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

// Word n-gram language model with interpolated absolute discounting:
//
//   P(w | c) = max(N(c, w) - d, 0) / N(c) + (d * T(c) / N(c)) * P(w | c')
//
// where N(c) is the total count of context c, T(c) its number of distinct
// continuations and c' is c without its oldest token. Unseen contexts defer
// to c' entirely; the empty context interpolates with the uniform
// distribution over the vocabulary (every token except BOS).
//
// Log-likelihoods are natural-log totals over all tokens plus the end of
// sentence marker, with order-1 BOS tokens of left padding.

#ifndef CFAIR_NGRAM_H_
#define CFAIR_NGRAM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cfair/text.h"

namespace cfair {

inline constexpr std::string_view kUnkToken = "<unk>";
inline constexpr std::string_view kBosToken = "<s>";
inline constexpr std::string_view kEosToken = "</s>";

struct NgramOptions {
  int order = 3;
  double discount = 0.75;
  int min_count = 2;

  // Throws ValidationError unless 1 <= order <= 5, 0 < discount < 1 and
  // min_count >= 1.
  void Validate() const;
};

class NgramModel {
 public:
  using TokenId = std::uint32_t;

  static NgramModel Train(std::span<const Tokens> corpus,
                          const NgramOptions& options);
  static NgramModel Train(std::span<const Document> corpus,
                          const NgramOptions& options);

  // Model with no counts: every probability is 1 / |vocab|. UNK and EOS are
  // added to `words` when missing.
  static NgramModel Untrained(std::vector<std::string> words, int order,
                              double discount);

  int order() const { return order_; }
  double discount() const { return discount_; }

  // Predictable tokens (UNK, EOS, then words in lexicographic order).
  const std::vector<std::string>& vocab() const { return vocab_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  bool InVocab(std::string_view token) const;

  // Context tokens beyond the last order-1 are ignored; unknown tokens map to
  // UNK, "<s>" to BOS.
  double Prob(std::span<const std::string> context,
              std::string_view next) const;

  // Sum of ln P over tokens and the closing EOS.
  double ScoreSequence(std::span<const std::string> tokens) const;

  // Raw count N(context, next); 0 when absent.
  std::uint64_t Count(std::span<const std::string> context,
                      std::string_view next) const;
  // N(context) and T(context).
  std::uint64_t ContextTotal(std::span<const std::string> context) const;
  std::uint64_t ContextTypes(std::span<const std::string> context) const;

  // Contexts with at least one count, as token strings (BOS spelled "<s>").
  std::vector<Tokens> ObservedContexts() const;

  // Versioned JSON model file; see README for the schema.
  std::string ToJson() const;
  static NgramModel FromJson(std::string_view content);

  friend bool operator==(const NgramModel& a, const NgramModel& b);

 private:
  struct ContextStats {
    std::unordered_map<TokenId, std::uint64_t> next;
    std::uint64_t total = 0;
  };
  struct KeyHash {
    std::size_t operator()(const std::vector<TokenId>& key) const noexcept;
  };
  using ContextMap =
      std::unordered_map<std::vector<TokenId>, ContextStats, KeyHash>;

  static constexpr TokenId kUnkId = 0;
  static constexpr TokenId kEosId = 1;
  static constexpr TokenId kBosId = 0xFFFFFFFFu;

  NgramModel() = default;
  void BuildIndex();
  TokenId ToId(std::string_view token) const;
  std::vector<TokenId> ContextIds(std::span<const std::string> context) const;
  double ProbIds(std::span<const TokenId> context, TokenId next) const;
  const ContextStats* FindContext(std::span<const TokenId> context) const;
  std::string IdToString(TokenId id) const;

  int order_ = 1;
  double discount_ = 0.5;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, TokenId> index_;
  ContextMap contexts_;
};

}  // namespace cfair

#endif  // CFAIR_NGRAM_H_
