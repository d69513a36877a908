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

#include "uavrisk/ttc.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

#include "uavrisk/errors.hpp"

namespace uavrisk
{

PairGeometry pair_geometry(const AgentState & a, const AgentState & b)
{
  if (a.state.frame != b.state.frame) {
    throw std::invalid_argument("pair_geometry requires states at the same frame");
  }
  if (a.id == b.id) {
    throw std::invalid_argument("pair_geometry requires distinct identities");
  }

  PairGeometry g;
  g.id_a = a.id;
  g.id_b = b.id;
  g.frame = a.state.frame;
  g.position_a = a.state.position;
  g.position_b = b.state.position;
  g.rel_velocity = b.state.velocity - a.state.velocity;
  g.rel_speed = g.rel_velocity.norm();
  g.distance = (a.state.position - b.state.position).norm();
  g.alpha = angle_between(a.state.velocity, b.state.velocity);

  if (g.distance == 0.0) {
    // Coincident centers: any relative motion closes the (zero) gap.
    g.closing_speed = g.rel_speed;
    g.theta = 0.0;
    return g;
  }

  const Vec2 toward_a = (a.state.position - b.state.position) / g.distance;
  g.closing_speed = g.rel_velocity.dot(toward_a);
  g.theta = angle_between(g.rel_velocity, toward_a);
  return g;
}

double rel_speed_law_of_cosines(double speed_a, double speed_b, double alpha)
{
  if (speed_a < 0.0 || speed_b < 0.0) {
    throw std::invalid_argument("speeds must be non-negative");
  }
  const double sq =
    speed_a * speed_a + speed_b * speed_b - 2.0 * speed_a * speed_b * std::cos(alpha);
  return std::sqrt(std::max(sq, 0.0));
}

std::optional<double> time_to_collision(const PairGeometry & g, TtcMode mode)
{
  switch (mode) {
    case TtcMode::projected:
      if (g.closing_speed > kMovingEpsilon) {
        return g.distance / g.closing_speed;
      }
      return std::nullopt;
    case TtcMode::literal:
      if (g.rel_speed > kMovingEpsilon && g.closing_speed > 0.0) {
        return g.distance / g.rel_speed;
      }
      return std::nullopt;
  }
  return std::nullopt;
}

bool classify_critical(const std::optional<double> & ttc, double threshold)
{
  if (threshold <= 0.0) {
    throw std::invalid_argument("threshold must be positive");
  }
  return ttc.has_value() && *ttc < threshold;
}

SpatialGrid::SpatialGrid(std::span<const AgentState> states, double cell_size)
: states_(states), cell_size_(cell_size)
{
  if (!(cell_size > 0.0)) {
    throw std::invalid_argument("grid cell size must be positive");
  }
  for (std::size_t i = 0; i < states_.size(); ++i) {
    cells_[cell_of(states_[i].state.position)].push_back(i);
  }
}

std::pair<std::int64_t, std::int64_t> SpatialGrid::cell_of(const Vec2 & p) const
{
  return {static_cast<std::int64_t>(std::floor(p.x / cell_size_)),
          static_cast<std::int64_t>(std::floor(p.y / cell_size_))};
}

std::vector<std::size_t> SpatialGrid::neighborhood(std::size_t i) const
{
  const auto [ci, cj] = cell_of(states_[i].state.position);
  std::vector<std::size_t> out;
  for (std::int64_t di = -1; di <= 1; ++di) {
    for (std::int64_t dj = -1; dj <= 1; ++dj) {
      const auto it = cells_.find({ci + di, cj + dj});
      if (it == cells_.end()) {
        continue;
      }
      for (const std::size_t idx : it->second) {
        if (idx != i) {
          out.push_back(idx);
        }
      }
    }
  }
  return out;
}

std::vector<TtcRecord> assess_frame(
  std::span<const AgentState> states, const AssessParams & params)
{
  if (!(params.radius > 0.0)) {
    throw std::invalid_argument("pairing radius must be positive");
  }

  if (!states.empty()) {
    std::set<std::int64_t> ids;
    const std::int64_t frame = states.front().state.frame;
    for (const auto & s : states) {
      if (!ids.insert(s.id).second) {
        throw ValidationError("duplicate identity " + std::to_string(s.id) + " at frame " +
                              std::to_string(frame));
      }
      if (s.state.frame != frame) {
        throw ValidationError("assess_frame received states from multiple frames");
      }
    }
  }

  const SpatialGrid grid(states, params.radius);

  std::vector<TtcRecord> records;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (const std::size_t j : grid.neighborhood(i)) {
      // Visit each unordered pair once, from its smaller-id side.
      if (states[j].id <= states[i].id) {
        continue;
      }
      const double d = (states[i].state.position - states[j].state.position).norm();
      if (d > params.radius) {
        continue;
      }
      TtcRecord rec;
      rec.geometry = pair_geometry(states[i], states[j]);
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

}  // namespace uavrisk
