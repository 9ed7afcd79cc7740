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


#include "cfair/features.h"

#include <algorithm>

#include "cfair/errors.h"

namespace cfair {

void FeatureConfig::Validate() const {
  if (dim < 256 || (dim & (dim - 1)) != 0) {
    throw ValidationError("feature dim must be a power of two >= 256, got " +
                          std::to_string(dim));
  }
  if (dim > (std::size_t{1} << 31)) {
    throw ValidationError("feature dim too large");
  }
  if (ngram_orders.empty()) throw ValidationError("ngram_orders is empty");
  for (int order : ngram_orders) {
    if (order != 1 && order != 2) {
      throw ValidationError("ngram orders must be 1 or 2");
    }
  }
}

std::uint64_t HashFeature(std::string_view key, std::uint64_t seed) {
  // FNV-1a, then a splitmix64 finalizer keyed by the seed.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ull;
  }
  h ^= seed + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ull;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebull;
  h ^= h >> 31;
  return h;
}

FeatureVector Featurize(std::span<const std::string> tokens, std::size_t dim,
                        std::uint64_t hash_seed,
                        std::span<const int> ngram_orders) {
  const std::uint64_t mask = dim - 1;
  std::vector<std::uint32_t> indices;
  indices.reserve(tokens.size() * 2);
  for (int order : ngram_orders) {
    if (order == 1) {
      for (const std::string& t : tokens) {
        indices.push_back(
            static_cast<std::uint32_t>(HashFeature(t, hash_seed) & mask));
      }
    } else if (order == 2) {
      std::string key;
      for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        key.assign(tokens[i]).push_back('\x1F');
        key.append(tokens[i + 1]);
        indices.push_back(
            static_cast<std::uint32_t>(HashFeature(key, hash_seed) & mask));
      }
    }
  }
  std::sort(indices.begin(), indices.end());
  FeatureVector out;
  for (std::uint32_t index : indices) {
    if (!out.entries.empty() && out.entries.back().first == index) {
      out.entries.back().second += 1.0;
    } else {
      out.entries.emplace_back(index, 1.0);
    }
  }
  return out;
}

FeatureVector Featurize(std::span<const std::string> tokens,
                        const FeatureConfig& config) {
  return Featurize(tokens, config.dim, config.hash_seed, config.ngram_orders);
}

}  // namespace cfair
