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

#ifndef CFAIR_RANDOM_H_
#define CFAIR_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace cfair {

// Seeded generator with platform-independent derived draws. std::mt19937_64
// output is fixed by the standard; the std:: distributions are not, so the
// bounded/real draws are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t Uniform(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double UniformReal();

  bool Bernoulli(double p) { return UniformReal() < p; }

  // Index drawn proportionally to non-negative weights (positive sum).
  std::size_t Categorical(std::span<const double> weights);

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(Uniform(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  // k distinct indices from [0, n) in draw order (partial Fisher-Yates).
  std::vector<std::size_t> SampleWithoutReplacement(std::size_t n,
                                                    std::size_t k);

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream);

}  // namespace cfair

#endif  // CFAIR_RANDOM_H_
