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

#ifndef CFAIR_TEXT_H_
#define CFAIR_TEXT_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfair {

using Tokens = std::vector<std::string>;

// Tokenizer shared by every component:
//  * split on Unicode whitespace (UTF-8 input),
//  * lowercase ASCII letters (other code points pass through unchanged),
//  * strip leading and trailing ASCII punctuation from each token,
//  * drop tokens that become empty.
// Intra-word hyphens and apostrophes survive ("african-american", "don't").
Tokens Tokenize(std::string_view text);

std::string JoinTokens(std::span<const std::string> tokens,
                       std::string_view separator = " ");

// A text instance. `tokens` is always Tokenize(raw_text) for documents built
// with MakeDocument; counterfactual documents carry substituted tokens and a
// raw_text re-joined from them.
struct Document {
  std::string id;
  Tokens tokens;
  std::string raw_text;
  std::optional<int> label;  // 1 = hate, 0 = not hate
};

Document MakeDocument(std::string id, std::string raw_text,
                      std::optional<int> label = std::nullopt);

// Document whose tokens are given directly (raw_text = joined tokens).
Document DocumentFromTokens(std::string id, Tokens tokens,
                            std::optional<int> label = std::nullopt);

}  // namespace cfair

#endif  // CFAIR_TEXT_H_
