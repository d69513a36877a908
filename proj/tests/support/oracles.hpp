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

// Test-side reference implementations and generators. The all-pairs
// assessment is the oracle for the spatial-grid pruning path and must stay
// independent of it.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "uavrisk/ttc.hpp"

namespace uavrisk::testing
{

/// Reference assessment: every unordered pair, filtered by radius, no grid.
inline std::vector<TtcRecord> assess_frame_all_pairs(
  std::span<const AgentState> states, const AssessParams & params)
{
  std::vector<TtcRecord> records;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      const auto & lo = states[i].id < states[j].id ? states[i] : states[j];
      const auto & hi = states[i].id < states[j].id ? states[j] : states[i];
      const double d = (lo.state.position - hi.state.position).norm();
      if (d > params.radius) {
        continue;
      }
      TtcRecord rec;
      rec.geometry = pair_geometry(lo, hi);
      rec.mode = params.mode;
      rec.ttc = time_to_collision(rec.geometry, params.mode);
      rec.critical = classify_critical(rec.ttc, params.threshold);
      records.push_back(rec);
    }
  }
  std::sort(records.begin(), records.end(), [](const TtcRecord & a, const TtcRecord & b) {
    return std::tie(a.geometry.id_a, a.geometry.id_b) <
           std::tie(b.geometry.id_a, b.geometry.id_b);
  });
  return records;
}

inline AgentState make_state(
  std::int64_t id, double x, double y, double vx, double vy, std::int64_t frame = 1)
{
  const Vec2 v{vx, vy};
  return {id, {frame, {x, y}, v, v.norm()}};
}

/// Uniformly random frame of n users over a square extent.
inline std::vector<AgentState> random_frame(
  std::mt19937_64 & rng, int n, double extent, double vmax, std::int64_t frame = 1)
{
  std::uniform_real_distribution<double> pos(0.0, extent);
  std::uniform_real_distribution<double> vel(-vmax, vmax);
  std::vector<AgentState> states;
  states.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    states.push_back(make_state(i, pos(rng), pos(rng), vel(rng), vel(rng), frame));
  }
  return states;
}

}  // namespace uavrisk::testing
