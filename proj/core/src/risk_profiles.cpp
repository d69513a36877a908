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

#include "uavrisk/risk_profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <tuple>

#include "text_util.hpp"

namespace uavrisk
{

double HeatmapGrid::total_intensity() const
{
  double sum = 0.0;
  for (const auto & [cell, v] : cells) {
    sum += v;
  }
  return sum;
}

double HeatmapGrid::max_intensity() const
{
  double best = 0.0;
  for (const auto & [cell, v] : cells) {
    best = std::max(best, v);
  }
  return best;
}

Vec2 HeatmapGrid::cell_center(std::int64_t i, std::int64_t j) const
{
  return {origin.x + (static_cast<double>(i) + 0.5) * cell_size,
          origin.y + (static_cast<double>(j) + 0.5) * cell_size};
}

std::int64_t PairStats::total() const
{
  std::int64_t sum = 0;
  for (const auto & e : entries) {
    sum += e.count;
  }
  return sum;
}

std::int64_t PairStats::vehicle_vehicle_count() const
{
  std::int64_t sum = 0;
  for (const auto & e : entries) {
    if (is_vehicle_category(e.category_a) && is_vehicle_category(e.category_b)) {
      sum += e.count;
    }
  }
  return sum;
}

std::int64_t PairStats::total_excluding_car_car() const
{
  std::int64_t sum = 0;
  for (const auto & e : entries) {
    if (!(e.category_a == "car" && e.category_b == "car")) {
      sum += e.count;
    }
  }
  return sum;
}

bool is_vehicle_category(const std::string & name)
{
  static const std::set<std::string> vehicles = {"car", "van", "truck", "bus", "motor"};
  return vehicles.count(name) > 0;
}

namespace
{

const std::string & category_or_other(const CategoryLookup & categories, std::int64_t id)
{
  static const std::string other = "other";
  const auto it = categories.find(id);
  return it != categories.end() ? it->second : other;
}

}  // namespace

MacroProfile macro_profile(
  std::span<const TtcRecord> frame_records, double threshold, const CategoryLookup & categories)
{
  MacroProfile profile;
  if (!frame_records.empty()) {
    profile.frame = frame_records.front().geometry.frame;
  }

  struct Best
  {
    double min_ttc{std::numeric_limits<double>::infinity()};
    std::int64_t partner{-1};
  };
  std::map<std::int64_t, Best> best_by_id;

  for (const auto & rec : frame_records) {
    if (!rec.ttc.has_value()) {
      continue;
    }
    const double t = *rec.ttc;
    const auto consider = [&](std::int64_t id, std::int64_t partner) {
      auto & best = best_by_id[id];
      if (t < best.min_ttc || (t == best.min_ttc && partner < best.partner)) {
        best.min_ttc = t;
        best.partner = partner;
      }
    };
    consider(rec.geometry.id_a, rec.geometry.id_b);
    consider(rec.geometry.id_b, rec.geometry.id_a);
  }

  for (const auto & [id, best] : best_by_id) {
    if (best.min_ttc < threshold) {
      profile.entries.push_back({id, category_or_other(categories, id), best.min_ttc,
                                 best.partner});
    }
  }
  return profile;
}

MicroProfile micro_profile(
  std::span<const TtcRecord> records, std::int64_t id, std::int64_t frame, double threshold)
{
  MicroProfile profile;
  profile.id = id;
  profile.frame = frame;

  for (const auto & rec : records) {
    if (rec.geometry.frame != frame || !rec.ttc.has_value() || !(*rec.ttc < threshold)) {
      continue;
    }
    if (rec.geometry.id_a == id) {
      profile.neighbors.push_back({rec.geometry.id_b, *rec.ttc, rec.geometry.distance});
    } else if (rec.geometry.id_b == id) {
      profile.neighbors.push_back({rec.geometry.id_a, *rec.ttc, rec.geometry.distance});
    }
  }

  std::sort(profile.neighbors.begin(), profile.neighbors.end(),
            [](const MicroProfile::Neighbor & a, const MicroProfile::Neighbor & b) {
              return a.ttc != b.ttc ? a.ttc < b.ttc : a.partner_id < b.partner_id;
            });
  return profile;
}

HeatmapGrid accumulate_heatmap(
  std::span<const TtcRecord> records, double threshold, double cell_size)
{
  if (!(cell_size > 0.0)) {
    throw std::invalid_argument("heatmap cell size must be positive");
  }

  HeatmapGrid grid;
  grid.cell_size = cell_size;

  // Origin is the componentwise minimum of the critical pair midpoints.
  bool any = false;
  for (const auto & rec : records) {
    if (!classify_critical(rec.ttc, threshold)) {
      continue;
    }
    const Vec2 mid = (rec.geometry.position_a + rec.geometry.position_b) / 2.0;
    if (!any) {
      grid.origin = mid;
      any = true;
    } else {
      grid.origin.x = std::min(grid.origin.x, mid.x);
      grid.origin.y = std::min(grid.origin.y, mid.y);
    }
  }
  if (!any) {
    return grid;
  }

  for (const auto & rec : records) {
    if (!classify_critical(rec.ttc, threshold)) {
      continue;
    }
    const Vec2 mid = (rec.geometry.position_a + rec.geometry.position_b) / 2.0;
    const auto i = static_cast<std::int64_t>(std::floor((mid.x - grid.origin.x) / cell_size));
    const auto j = static_cast<std::int64_t>(std::floor((mid.y - grid.origin.y) / cell_size));
    grid.cells[{i, j}] += threshold - *rec.ttc;
  }
  return grid;
}

PairStats pair_category_stats(
  std::span<const TtcRecord> records, double threshold, const CategoryLookup & categories)
{
  std::map<std::pair<std::string, std::string>, std::int64_t> counts;
  for (const auto & rec : records) {
    if (!classify_critical(rec.ttc, threshold)) {
      continue;
    }
    std::string a = category_or_other(categories, rec.geometry.id_a);
    std::string b = category_or_other(categories, rec.geometry.id_b);
    if (b < a) {
      std::swap(a, b);
    }
    ++counts[{a, b}];
  }

  PairStats stats;
  stats.entries.reserve(counts.size());
  for (const auto & [pair, count] : counts) {
    stats.entries.push_back({pair.first, pair.second, count});
  }
  std::sort(stats.entries.begin(), stats.entries.end(),
            [](const PairStats::Entry & a, const PairStats::Entry & b) {
              if (a.count != b.count) {
                return a.count > b.count;
              }
              return std::tie(a.category_a, a.category_b) < std::tie(b.category_a, b.category_b);
            });
  return stats;
}

std::string render_heatmap_svg(const HeatmapGrid & grid)
{
  constexpr int kCellPx = 10;

  std::int64_t min_i = 0;
  std::int64_t min_j = 0;
  std::int64_t max_i = 0;
  std::int64_t max_j = 0;
  bool any = false;
  for (const auto & [cell, v] : grid.cells) {
    if (v <= 0.0) {
      continue;
    }
    if (!any) {
      min_i = max_i = cell.first;
      min_j = max_j = cell.second;
      any = true;
    } else {
      min_i = std::min(min_i, cell.first);
      max_i = std::max(max_i, cell.first);
      min_j = std::min(min_j, cell.second);
      max_j = std::max(max_j, cell.second);
    }
  }

  const std::int64_t width = any ? (max_i - min_i + 1) * kCellPx : kCellPx;
  const std::int64_t height = any ? (max_j - min_j + 1) * kCellPx : kCellPx;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
         std::to_string(width) + " " + std::to_string(height) + "\">\n";
  svg += "  <!-- schema_version=1 -->\n";

  if (any) {
    const double max_intensity = grid.max_intensity();
    for (const auto & [cell, v] : grid.cells) {
      if (v <= 0.0) {
        continue;
      }
      const std::int64_t x = (cell.first - min_i) * kCellPx;
      // SVG y grows downward; flip so larger world y is drawn higher.
      const std::int64_t y = (max_j - cell.second) * kCellPx;
      const double opacity = v / max_intensity;
      svg += "  <rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
             "\" width=\"" + std::to_string(kCellPx) + "\" height=\"" +
             std::to_string(kCellPx) + "\" fill=\"#b10026\" fill-opacity=\"" +
             detail::format_double(opacity) + "\"/>\n";
    }
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace uavrisk
