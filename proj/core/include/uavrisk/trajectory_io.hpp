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

// Per-frame detection annotations: parsing, validation and grouping into
// per-identity tracks. The on-disk format is one detection per line with ten
// comma-separated numeric fields:
//   frame,id,bb_left,bb_top,bb_width,bb_height,score,category,truncation,occlusion

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "uavrisk/geometry.hpp"

namespace uavrisk
{

/// One road user observed in one frame.
struct Detection
{
  std::int64_t frame{1};  // 1-based frame index
  std::int64_t id{0};
  double bb_left{0.0};
  double bb_top{0.0};
  double bb_width{0.0};
  double bb_height{0.0};
  double score{1.0};
  std::int64_t category{0};
  std::int64_t truncation{0};  // pass-through metadata
  std::int64_t occlusion{0};   // pass-through metadata

  [[nodiscard]] Vec2 center_px() const
  {
    return {bb_left + bb_width / 2.0, bb_top + bb_height / 2.0};
  }

  bool operator==(const Detection &) const = default;
};

/// Mapping from integer category codes to category names. Codes without an
/// explicit entry fall back to "other"; detections whose code maps to
/// "ignored" are excluded from all downstream analysis.
class CategoryMap
{
public:
  static const std::vector<std::string> & known_names();

  /// VisDrone-style defaults: 1=pedestrian, 3=bicycle, 4=car, 5=van, 6=truck,
  /// 9=bus, 10=motor, 0=ignored.
  static CategoryMap visdrone_defaults();

  /// Registers or overrides a code. Throws ValidationError if the name is not
  /// one of known_names().
  void set(std::int64_t code, const std::string & name);

  [[nodiscard]] const std::string & name_for(std::int64_t code) const;
  [[nodiscard]] bool has(std::int64_t code) const;
  [[nodiscard]] bool is_ignored(std::int64_t code) const;

  [[nodiscard]] const std::map<std::int64_t, std::string> & table() const { return table_; }

private:
  std::map<std::int64_t, std::string> table_;
};

struct TrackSample
{
  std::int64_t frame{0};
  double center_x_px{0.0};
  double center_y_px{0.0};
  double bb_width_px{0.0};
  double bb_height_px{0.0};

  bool operator==(const TrackSample &) const = default;
};

/// Time-ordered detections of one identity.
struct Track
{
  std::int64_t id{0};
  std::string category;  // dominant category name over the identity's detections
  std::vector<TrackSample> samples;
};

/// Parses annotation text into detections, preserving line order. Detections
/// whose category maps to "ignored" are dropped. Throws ParseError (with the
/// offending line number) on malformed lines and ValidationError when two
/// retained lines share a (frame, id) pair.
std::vector<Detection> parse_annotations(std::string_view text, const CategoryMap & map);

/// Inverse of parse_annotations: one line per detection, shortest decimal
/// representation that round-trips exactly.
std::string serialize_annotations(const std::vector<Detection> & dets);

/// Groups validated detections into per-identity tracks, frame-sorted.
/// Dominant category is the most frequent code (ties: smallest code).
std::vector<Track> build_tracks(const std::vector<Detection> & dets, const CategoryMap & map);

/// Report-only dataset diagnostics.
struct DatasetReport
{
  struct Duplicate
  {
    std::int64_t frame{0};
    std::int64_t id{0};
  };
  struct FrameGap
  {
    std::int64_t id{0};
    std::int64_t from_frame{0};
    std::int64_t to_frame{0};
    std::int64_t gap{0};  // to_frame - from_frame
  };

  std::vector<Duplicate> duplicates;
  std::vector<FrameGap> gaps;
  std::vector<std::int64_t> unknown_categories;  // codes absent from the map

  [[nodiscard]] bool clean() const
  {
    return duplicates.empty() && gaps.empty() && unknown_categories.empty();
  }
};

/// Flags duplicate (frame, id) pairs, per-identity frame gaps exceeding
/// gap_limit, and category codes without an explicit map entry.
DatasetReport validate_dataset(
  const std::vector<Detection> & dets, const CategoryMap & map, std::int64_t gap_limit);

}  // namespace uavrisk
