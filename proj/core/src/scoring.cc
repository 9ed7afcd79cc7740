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

#include "cfair/scoring.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include "cfair/errors.h"
#include "cfair/sha256.h"

namespace cfair {

std::vector<double> NgramScorer::Score(std::span<const ScoreRequest> requests) {
  std::vector<double> out;
  out.reserve(requests.size());
  for (const ScoreRequest& r : requests) {
    out.push_back(model_.ScoreSequence(r.tokens));
  }
  return out;
}

ScoreCache::ScoreCache(const ScoreCache& other) {
  std::shared_lock lock(other.mutex_);
  entries_ = other.entries_;
}

ScoreCache& ScoreCache::operator=(const ScoreCache& other) {
  if (this == &other) return *this;
  std::unordered_map<std::string, double> copy;
  {
    std::shared_lock lock(other.mutex_);
    copy = other.entries_;
  }
  std::unique_lock lock(mutex_);
  entries_ = std::move(copy);
  return *this;
}

std::string ScoreCache::KeyFor(std::span<const std::string> tokens) {
  return Sha256Hex(JoinTokens(tokens));
}

ScoreCache ScoreCache::FromTsv(std::string_view content) {
  ScoreCache cache;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    const auto bad = [&](const std::string& why) {
      return ValidationError("score cache line " + std::to_string(line_no) +
                             ": " + why);
    };
    if (tab == std::string_view::npos) throw bad("missing tab");
    const std::string key(line.substr(0, tab));
    if (key.size() != 64 ||
        key.find_first_not_of("0123456789abcdef") != std::string::npos) {
      throw bad("key is not a lowercase sha256 hex digest");
    }
    const std::string value(line.substr(tab + 1));
    char* parse_end = nullptr;
    const double v = std::strtod(value.c_str(), &parse_end);
    if (value.empty() || parse_end != value.c_str() + value.size() ||
        !std::isfinite(v)) {
      throw bad("invalid log-probability '" + value + "'");
    }
    cache.entries_[key] = v;
  }
  return cache;
}

ScoreCache ScoreCache::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return ScoreCache{};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return FromTsv(buffer.str());
}

std::optional<double> ScoreCache::Find(const std::string& key) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ScoreCache::Insert(const std::string& key, double logprob) {
  std::unique_lock lock(mutex_);
  entries_[key] = logprob;
}

std::size_t ScoreCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::string ScoreCache::ToTsv() const {
  std::vector<std::pair<std::string, double>> rows;
  {
    std::shared_lock lock(mutex_);
    rows.assign(entries_.begin(), entries_.end());
  }
  std::sort(rows.begin(), rows.end());
  std::string out;
  char buffer[64];
  for (const auto& [key, value] : rows) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    out.append(key).append("\t").append(buffer).append("\n");
  }
  return out;
}

void ScoreCache::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write score cache '" + path + "'");
  out << ToTsv();
}

std::vector<ScoredSet> ScoreSets(Scorer& scorer,
                                 std::span<const CounterfactualSet> cfsets,
                                 ScoreCache& cache) {
  struct Slot {
    std::size_t set;
    std::size_t variant;  // SIZE_MAX = original
  };
  std::vector<ScoredSet> out(cfsets.size());
  std::vector<ScoreRequest> requests;
  std::vector<std::vector<Slot>> request_slots;
  std::vector<std::string> request_keys;
  std::unordered_map<std::string, std::size_t> pending;  // key -> request

  for (std::size_t s = 0; s < cfsets.size(); ++s) {
    const CounterfactualSet& cfset = cfsets[s];
    out[s].cfset = cfset;
    out[s].variant_lls.assign(cfset.variants.size(), 0.0);
    auto lookup = [&](std::span<const std::string> tokens, std::string id,
                      Slot slot) {
      std::string key = ScoreCache::KeyFor(tokens);
      if (auto hit = cache.Find(key)) {
        if (slot.variant == SIZE_MAX) {
          out[s].original_ll = *hit;
        } else {
          out[s].variant_lls[slot.variant] = *hit;
        }
        return;
      }
      if (auto it = pending.find(key); it != pending.end()) {
        request_slots[it->second].push_back(slot);
        return;
      }
      pending.emplace(key, requests.size());
      requests.push_back(ScoreRequest{std::move(id), tokens});
      request_slots.push_back({slot});
      request_keys.push_back(std::move(key));
    };
    lookup(cfset.original.tokens, cfset.original.id, Slot{s, SIZE_MAX});
    for (std::size_t v = 0; v < cfset.variants.size(); ++v) {
      lookup(cfset.variants[v].tokens,
             cfset.original.id + "#" +
                 std::to_string(cfset.variants[v].entry_id),
             Slot{s, v});
    }
  }
  if (requests.empty()) return out;

  const std::vector<double> scores = scorer.Score(requests);
  if (scores.size() != requests.size()) {
    throw ScorerError("scorer returned " + std::to_string(scores.size()) +
                      " scores for " + std::to_string(requests.size()) +
                      " requests");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw ScorerError("non-finite log-likelihood for '" + requests[i].id +
                        "'");
    }
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    for (const Slot& slot : request_slots[i]) {
      if (slot.variant == SIZE_MAX) {
        out[slot.set].original_ll = scores[i];
      } else {
        out[slot.set].variant_lls[slot.variant] = scores[i];
      }
    }
    cache.Insert(request_keys[i], scores[i]);
  }
  return out;
}

ScoredSet ScoreSet(Scorer& scorer, const CounterfactualSet& cfset,
                   ScoreCache& cache) {
  return std::move(ScoreSets(scorer, std::span(&cfset, 1), cache).front());
}

}  // namespace cfair
