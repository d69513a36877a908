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

// Aggregations over TTC records: per-frame risk listings, per-user neighbor
// listings, unordered category-pair statistics and a spatial severity heatmap.

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uavrisk/geometry.hpp"
#include "uavrisk/ttc.hpp"

namespace uavrisk
{

using CategoryLookup = std::map<std::int64_t, std::string>;

/// All road users at one frame whose minimum present TTC is critical.
struct MacroProfile
{
  struct Entry
  {
    std::int64_t id{0};
    std::string category;
    double min_ttc{0.0};
    std::int64_t partner_id{0};  // pair achieving the minimum (ties: smaller id)
  };

  std::int64_t frame{0};
  std::vector<Entry> entries;  // ascending by id
};

/// Critical neighbors of one road user at one frame, most urgent first.
struct MicroProfile
{
  struct Neighbor
  {
    std::int64_t partner_id{0};
    double ttc{0.0};
    double distance{0.0};
  };

  std::int64_t id{0};
  std::int64_t frame{0};
  std::vector<Neighbor> neighbors;  // ascending by ttc
};

/// Accumulated conflict severity on a uniform grid. Each critical record adds
/// (threshold - ttc) at the cell containing the midpoint of the pair.
struct HeatmapGrid
{
  Vec2 origin;            // world position of cell (0,0)'s lower corner
  double cell_size{1.0};  // meters
  std::map<std::pair<std::int64_t, std::int64_t>, double> cells;

  [[nodiscard]] double total_intensity() const;
  [[nodiscard]] double max_intensity() const;
  [[nodiscard]] Vec2 cell_center(std::int64_t i, std::int64_t j) const;
};

/// Counts of critical records keyed by unordered category pair.
struct PairStats
{
  struct Entry
  {
    std::string category_a;  // lexicographically <= category_b
    std::string category_b;
    std::int64_t count{0};
  };

  std::vector<Entry> entries;  // descending by count, then by names

  [[nodiscard]] std::int64_t total() const;
  /// Count restricted to pairs where both categories are vehicles
  /// (car, van, truck, bus, motor).
  [[nodiscard]] std::int64_t vehicle_vehicle_count() const;
  [[nodiscard]] std::int64_t total_excluding_car_car() const;
};

[[nodiscard]] bool is_vehicle_category(const std::string & name);

/// Builds the per-frame macroscopic profile from that frame's records. A user
/// is listed iff the minimum over its present TTCs is strictly below the
/// threshold.
MacroProfile macro_profile(
  std::span<const TtcRecord> frame_records, double threshold, const CategoryLookup & categories);

/// Critical neighbors of `id` at `frame`, ascending by TTC. Unknown ids yield
/// an empty profile.
MicroProfile micro_profile(
  std::span<const TtcRecord> records, std::int64_t id, std::int64_t frame, double threshold);

/// Accumulates all critical records into a severity heatmap. The grid origin
/// is the componentwise minimum of the critical pair midpoints.
HeatmapGrid accumulate_heatmap(
  std::span<const TtcRecord> records, double threshold, double cell_size);

/// Counts critical records per unordered category pair.
PairStats pair_category_stats(
  std::span<const TtcRecord> records, double threshold, const CategoryLookup & categories);

/// Deterministic SVG rendering of a heatmap: one rectangle per nonzero cell,
/// opacity proportional to intensity / max intensity. No timestamps.
std::string render_heatmap_svg(const HeatmapGrid & grid);

}  // namespace uavrisk
