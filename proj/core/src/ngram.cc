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

#include "cfair/ngram.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <set>

#include "cfair/errors.h"

namespace cfair {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;
constexpr std::string_view kContextSeparator = "\x1F";

std::vector<std::string> SplitContextKey(const std::string& key) {
  std::vector<std::string> out;
  if (key.empty()) return out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = key.find(kContextSeparator, begin);
    out.push_back(key.substr(begin, end - begin));
    if (end == std::string::npos) break;
    begin = end + kContextSeparator.size();
  }
  return out;
}

}  // namespace

void NgramOptions::Validate() const {
  if (order < 1 || order > 5) {
    throw ValidationError("n-gram order must be in [1, 5], got " +
                          std::to_string(order));
  }
  if (!(discount > 0.0 && discount < 1.0)) {
    throw ValidationError("discount must be strictly inside (0, 1), got " +
                          std::to_string(discount));
  }
  if (min_count < 1) {
    throw ValidationError("min_count must be >= 1, got " +
                          std::to_string(min_count));
  }
}

std::size_t NgramModel::KeyHash::operator()(
    const std::vector<TokenId>& key) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (TokenId id : key) {
    h ^= id;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 29));
}

void NgramModel::BuildIndex() {
  index_.clear();
  for (TokenId i = 0; i < vocab_.size(); ++i) index_.emplace(vocab_[i], i);
}

NgramModel::TokenId NgramModel::ToId(std::string_view token) const {
  if (token == kBosToken) return kBosId;
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnkId : it->second;
}

std::string NgramModel::IdToString(TokenId id) const {
  return id == kBosId ? std::string(kBosToken) : vocab_.at(id);
}

bool NgramModel::InVocab(std::string_view token) const {
  return index_.contains(std::string(token));
}

NgramModel NgramModel::Untrained(std::vector<std::string> words, int order,
                                 double discount) {
  NgramOptions{order, discount, 1}.Validate();
  std::set<std::string> unique(words.begin(), words.end());
  unique.erase(std::string(kUnkToken));
  unique.erase(std::string(kEosToken));
  unique.erase(std::string(kBosToken));
  NgramModel model;
  model.order_ = order;
  model.discount_ = discount;
  model.vocab_ = {std::string(kUnkToken), std::string(kEosToken)};
  model.vocab_.insert(model.vocab_.end(), unique.begin(), unique.end());
  model.BuildIndex();
  return model;
}

NgramModel NgramModel::Train(std::span<const Document> corpus,
                             const NgramOptions& options) {
  std::vector<Tokens> sentences;
  sentences.reserve(corpus.size());
  for (const Document& d : corpus) sentences.push_back(d.tokens);
  return Train(std::span<const Tokens>(sentences), options);
}

NgramModel NgramModel::Train(std::span<const Tokens> corpus,
                             const NgramOptions& options) {
  options.Validate();
  if (corpus.empty()) throw ValidationError("cannot train on an empty corpus");

  std::map<std::string, std::uint64_t> freq;
  for (const Tokens& sentence : corpus) {
    for (const std::string& t : sentence) ++freq[t];
  }
  std::vector<std::string> words;
  for (const auto& [token, n] : freq) {
    if (n >= static_cast<std::uint64_t>(options.min_count)) {
      words.push_back(token);
    }
  }
  NgramModel model = Untrained(std::move(words), options.order,
                               options.discount);

  const std::size_t pad = static_cast<std::size_t>(options.order - 1);
  std::vector<TokenId> seq;
  std::vector<TokenId> key;
  for (const Tokens& sentence : corpus) {
    seq.assign(pad, kBosId);
    for (const std::string& t : sentence) {
      const TokenId id = model.ToId(t);
      seq.push_back(id == kBosId ? kUnkId : id);
    }
    seq.push_back(kEosId);
    for (std::size_t i = pad; i < seq.size(); ++i) {
      for (std::size_t k = 0; k <= pad; ++k) {
        key.assign(seq.begin() + static_cast<std::ptrdiff_t>(i - k),
                   seq.begin() + static_cast<std::ptrdiff_t>(i));
        ContextStats& stats = model.contexts_[key];
        ++stats.next[seq[i]];
        ++stats.total;
      }
    }
  }
  return model;
}

std::vector<NgramModel::TokenId> NgramModel::ContextIds(
    std::span<const std::string> context) const {
  const std::size_t keep =
      std::min(context.size(), static_cast<std::size_t>(order_ - 1));
  std::vector<TokenId> ids;
  ids.reserve(keep);
  for (std::size_t i = context.size() - keep; i < context.size(); ++i) {
    ids.push_back(ToId(context[i]));
  }
  return ids;
}

const NgramModel::ContextStats* NgramModel::FindContext(
    std::span<const TokenId> context) const {
  auto it = contexts_.find(std::vector<TokenId>(context.begin(), context.end()));
  return it == contexts_.end() ? nullptr : &it->second;
}

double NgramModel::ProbIds(std::span<const TokenId> context,
                           TokenId next) const {
  if (next == kBosId) next = kUnkId;
  // Evaluate the recursion bottom-up: uniform base, then contexts of
  // increasing length ending at the most recent token.
  double p = 1.0 / static_cast<double>(vocab_.size());
  const double d = discount_;
  for (std::size_t k = 0; k <= context.size(); ++k) {
    const ContextStats* stats = FindContext(context.last(k));
    if (stats == nullptr || stats->total == 0) continue;
    const double n = static_cast<double>(stats->total);
    const double t = static_cast<double>(stats->next.size());
    auto it = stats->next.find(next);
    const double count =
        it == stats->next.end() ? 0.0 : static_cast<double>(it->second);
    p = std::max(count - d, 0.0) / n + (d * t / n) * p;
  }
  return p;
}

double NgramModel::Prob(std::span<const std::string> context,
                        std::string_view next) const {
  const std::vector<TokenId> ids = ContextIds(context);
  return ProbIds(ids, ToId(next));
}

double NgramModel::ScoreSequence(std::span<const std::string> tokens) const {
  const std::size_t pad = static_cast<std::size_t>(order_ - 1);
  std::vector<TokenId> seq(pad, kBosId);
  seq.reserve(pad + tokens.size() + 1);
  for (const std::string& t : tokens) {
    const TokenId id = ToId(t);
    seq.push_back(id == kBosId ? kUnkId : id);
  }
  seq.push_back(kEosId);
  double total = 0.0;
  for (std::size_t i = pad; i < seq.size(); ++i) {
    const std::span<const TokenId> context(seq.data() + i - pad, pad);
    total += std::log(ProbIds(context, seq[i]));
  }
  return total;
}

std::uint64_t NgramModel::Count(std::span<const std::string> context,
                                std::string_view next) const {
  const ContextStats* stats = FindContext(ContextIds(context));
  if (stats == nullptr) return 0;
  auto it = stats->next.find(ToId(next));
  return it == stats->next.end() ? 0 : it->second;
}

std::uint64_t NgramModel::ContextTotal(
    std::span<const std::string> context) const {
  const ContextStats* stats = FindContext(ContextIds(context));
  return stats == nullptr ? 0 : stats->total;
}

std::uint64_t NgramModel::ContextTypes(
    std::span<const std::string> context) const {
  const ContextStats* stats = FindContext(ContextIds(context));
  return stats == nullptr ? 0 : stats->next.size();
}

std::vector<Tokens> NgramModel::ObservedContexts() const {
  std::vector<Tokens> out;
  out.reserve(contexts_.size());
  for (const auto& [key, stats] : contexts_) {
    Tokens context;
    for (TokenId id : key) context.push_back(IdToString(id));
    out.push_back(std::move(context));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string NgramModel::ToJson() const {
  // std::map keeps serialization order independent of hash-table layout.
  std::map<std::string, std::map<std::string, std::uint64_t>> counts;
  for (const auto& [key, stats] : contexts_) {
    std::string k;
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (i > 0) k.append(kContextSeparator);
      k.append(IdToString(key[i]));
    }
    auto& row = counts[k];
    for (const auto& [next, n] : stats.next) row[IdToString(next)] = n;
  }
  json root;
  root["format_version"] = kFormatVersion;
  root["order"] = order_;
  root["discount"] = discount_;
  root["vocab"] = vocab_;
  root["counts"] = counts;
  return root.dump();
}

NgramModel NgramModel::FromJson(std::string_view content) {
  json root;
  try {
    root = json::parse(content);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("n-gram model is not valid JSON: ") +
                          e.what());
  }
  try {
    if (root.at("format_version").get<int>() != kFormatVersion) {
      throw ValidationError("unsupported n-gram model format_version");
    }
    NgramModel model = Untrained(root.at("vocab").get<std::vector<std::string>>(),
                                 root.at("order").get<int>(),
                                 root.at("discount").get<double>());
    if (model.vocab_.size() != root.at("vocab").size()) {
      throw ValidationError("n-gram model vocab has duplicates or is missing "
                            "reserved tokens");
    }
    for (const auto& [key, row] : root.at("counts").items()) {
      std::vector<TokenId> ids;
      for (const std::string& t : SplitContextKey(key)) {
        const TokenId id = t == kBosToken ? kBosId : model.ToId(t);
        if (id != kBosId && !model.InVocab(t)) {
          throw ValidationError("context token '" + t + "' not in vocab");
        }
        ids.push_back(id);
      }
      if (ids.size() > static_cast<std::size_t>(model.order_ - 1)) {
        throw ValidationError("context longer than order - 1: '" + key + "'");
      }
      ContextStats& stats = model.contexts_[ids];
      for (const auto& [token, n] : row.items()) {
        if (!model.InVocab(token)) {
          throw ValidationError("predicted token '" + token +
                                "' not in vocab");
        }
        const auto count = n.get<std::uint64_t>();
        if (count < 1) throw ValidationError("stored counts must be >= 1");
        stats.next[model.ToId(token)] = count;
        stats.total += count;
      }
    }
    return model;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed n-gram model: ") + e.what());
  }
}

bool operator==(const NgramModel& a, const NgramModel& b) {
  if (a.order_ != b.order_ || a.discount_ != b.discount_ ||
      a.vocab_ != b.vocab_ || a.contexts_.size() != b.contexts_.size()) {
    return false;
  }
  for (const auto& [key, stats] : a.contexts_) {
    auto it = b.contexts_.find(key);
    if (it == b.contexts_.end() || it->second.total != stats.total ||
        it->second.next != stats.next) {
      return false;
    }
  }
  return true;
}

}  // namespace cfair
