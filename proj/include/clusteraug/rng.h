// Copyright 2026 The clusteraug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLUSTERAUG_RNG_H_
#define CLUSTERAUG_RNG_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace clusteraug {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Mixes a base seed with stream coordinates (sentence index, iteration,
// repetition, ...) so that every unit of work owns an independent stream.
inline std::uint64_t DeriveSeed(std::uint64_t seed,
                                std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = SplitMix64(seed);
  for (std::uint64_t part : parts) h = SplitMix64(h ^ SplitMix64(part));
  return h;
}

using Rng = std::mt19937_64;

// Uniform integer in [0, n). The standard distributions are not specified
// bit-for-bit across library implementations, so draws are done by
// rejection on the raw 64-bit engine output.
inline std::size_t UniformIndex(Rng& rng, std::size_t n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

// First `count` elements of `items` become a uniform random ordered sample
// (partial Fisher-Yates).
template <typename T>
void PartialShuffle(std::vector<T>& items, std::size_t count, Rng& rng) {
  const std::size_t n = items.size();
  if (count > n) count = n;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + UniformIndex(rng, n - i);
    if (j != i) std::swap(items[i], items[j]);
  }
}

}  // namespace clusteraug

#endif  // CLUSTERAUG_RNG_H_
