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

// Pairwise time-to-collision under the constant-velocity assumption: both
// users are taken to continue at their present speed on their present path.
// Neighbor search uses a uniform grid with cell size equal to the pairing
// radius, which makes the 3x3 cell neighborhood an exact candidate superset.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "uavrisk/calibration.hpp"
#include "uavrisk/geometry.hpp"

namespace uavrisk
{

inline constexpr double kMovingEpsilon = 1e-6;        // m/s below which a pair is "not closing"
inline constexpr double kDefaultTtcThreshold = 2.5;   // s
inline constexpr double kDefaultPairRadius = 30.0;    // m

/// How the TTC denominator is chosen. `projected` divides the gap by the
/// closing speed (the component of relative velocity along the line between
/// the two users); `literal` divides by the full relative speed and still
/// requires the pair to be closing.
enum class TtcMode
{
  projected,
  literal,
};

/// One identity's kinematic state at one frame.
struct AgentState
{
  std::int64_t id{0};
  KinematicState state;
};

/// Full pairwise geometry for one pair at one frame.
struct PairGeometry
{
  std::int64_t id_a{0};
  std::int64_t id_b{0};
  std::int64_t frame{0};
  Vec2 position_a;        // meters
  Vec2 position_b;        // meters
  double distance{0.0};   // center-to-center, meters
  Vec2 rel_velocity;      // v_b - v_a, m/s
  double rel_speed{0.0};  // |rel_velocity|
  double closing_speed{0.0};  // positive when the gap is shrinking
  double alpha{0.0};      // angle between the two velocity vectors, radians
  double theta{0.0};      // angle between rel_velocity and the b->a line, radians

  bool operator==(const PairGeometry &) const = default;
};

struct TtcRecord
{
  PairGeometry geometry;
  std::optional<double> ttc;  // seconds; empty when no positive TTC exists
  TtcMode mode{TtcMode::projected};
  bool critical{false};

  bool operator==(const TtcRecord &) const = default;
};

/// Computes the pairwise geometry of two states at the same frame. When the
/// positions coincide the geometry degenerates: distance 0, closing speed
/// defined as the relative speed, theta 0.
PairGeometry pair_geometry(const AgentState & a, const AgentState & b);

/// Relative speed by the law of cosines: sqrt(v1^2 + v2^2 - 2 v1 v2 cos(alpha)).
/// Kept as an independent cross-check of the vector-difference computation.
double rel_speed_law_of_cosines(double speed_a, double speed_b, double alpha);

/// TTC in seconds, or empty when no positive TTC exists (diverging, parallel,
/// or effectively stationary relative motion).
std::optional<double> time_to_collision(const PairGeometry & g, TtcMode mode);

/// A TTC is critical iff it is present and strictly below the threshold.
bool classify_critical(const std::optional<double> & ttc, double threshold);

struct AssessParams
{
  double radius{kDefaultPairRadius};      // meters; pairs farther apart are skipped
  double threshold{kDefaultTtcThreshold}; // seconds
  TtcMode mode{TtcMode::projected};
};

/// Uniform spatial hash over one frame's states; cell size equals the pairing
/// radius so candidates for a state always lie in its 3x3 cell neighborhood.
class SpatialGrid
{
public:
  SpatialGrid(std::span<const AgentState> states, double cell_size);

  /// Indices (into the constructing span) of states in the 3x3 neighborhood
  /// around the cell of `states[i]`, excluding i itself.
  [[nodiscard]] std::vector<std::size_t> neighborhood(std::size_t i) const;

  [[nodiscard]] double cell_size() const { return cell_size_; }

private:
  struct CellHash
  {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t> & c) const
    {
      return std::hash<std::int64_t>{}(c.first * 0x9e3779b97f4a7c15LL + c.second);
    }
  };

  [[nodiscard]] std::pair<std::int64_t, std::int64_t> cell_of(const Vec2 & p) const;

  std::span<const AgentState> states_;
  double cell_size_;
  std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>, CellHash>
    cells_;
};

/// Produces exactly one TtcRecord per unordered pair of states whose center
/// distance is within params.radius, sorted by (id_a, id_b) with id_a < id_b.
/// Equivalent to radius-filtered all-pairs evaluation.
std::vector<TtcRecord> assess_frame(
  std::span<const AgentState> states, const AssessParams & params);

}  // namespace uavrisk
