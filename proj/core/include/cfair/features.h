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


// Hashed unigram + bigram bag-of-words features.

#ifndef CFAIR_FEATURES_H_
#define CFAIR_FEATURES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cfair {

struct FeatureConfig {
  std::size_t dim = std::size_t{1} << 16;
  std::uint64_t hash_seed = 0;
  std::vector<int> ngram_orders = {1, 2};

  // Throws ValidationError unless dim is a power of two >= 256 and the orders
  // are a nonempty subset of {1, 2}.
  void Validate() const;
  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

// Sparse counts sorted by index, duplicates merged.
struct FeatureVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Seeded 64-bit hash of a unigram or of a bigram ("a" U+001F "b").
std::uint64_t HashFeature(std::string_view key, std::uint64_t seed);

// Low-level form usable with any power-of-two dim (gradient checks use 64).
FeatureVector Featurize(std::span<const std::string> tokens, std::size_t dim,
                        std::uint64_t hash_seed,
                        std::span<const int> ngram_orders);

FeatureVector Featurize(std::span<const std::string> tokens,
                        const FeatureConfig& config);

}  // namespace cfair

#endif  // CFAIR_FEATURES_H_
