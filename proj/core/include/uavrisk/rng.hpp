// Copyright 2026 The uavrisk Authors
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

#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace uavrisk
{

/// Engine seeded from (seed, stream) so independent consumers (e.g. forest
/// trees) draw from disjoint deterministic streams.
inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream = 0)
{
  std::seed_seq seq{
    static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform draw in [0, n) without distribution-object portability concerns.
inline std::uint64_t bounded(std::mt19937_64 & rng, std::uint64_t n)
{
  // Rejection sampling to avoid modulo bias.
  for (;;) {
    const std::uint64_t x = rng();
    const std::uint64_t r = x % n;
    if (x - r <= std::numeric_limits<std::uint64_t>::max() - (n - 1)) {
      return r;
    }
  }
}

/// Fisher-Yates shuffle driven by bounded(); deterministic for a given engine
/// state on any platform.
template <typename T>
void shuffle_indices(std::vector<T> & v, std::mt19937_64 & rng)
{
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace uavrisk
