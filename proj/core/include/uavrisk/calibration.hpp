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

// Pixel-to-meter calibration and world-frame kinematics. The scene scale is
// estimated from car bounding boxes assuming a nominal vehicle footprint, and
// per-track velocities come from finite differences over a configurable frame
// stride, smoothed with a centered moving average.

#pragma once

#include <cstdint>
#include <vector>

#include "uavrisk/geometry.hpp"
#include "uavrisk/trajectory_io.hpp"

namespace uavrisk
{

enum class ScaleSource
{
  estimated,
  manual,
};

struct SceneScale
{
  double meters_per_pixel{0.0};
  double fps{30.0};
  ScaleSource source{ScaleSource::estimated};
};

/// Nominal footprint of a generic car, used for scale estimation and for
/// sizing synthetic boxes.
struct VehicleDims
{
  double length_m{4.0};
  double width_m{1.7};
};

struct KinematicState
{
  std::int64_t frame{0};
  Vec2 position;  // meters
  Vec2 velocity;  // m/s, smoothed
  double speed{0.0};  // norm of velocity

  bool operator==(const KinematicState &) const = default;
};

/// Estimates meters-per-pixel as the median over all car detections of
/// sqrt(footprint_area / box_area_px). Throws EstimationError when the
/// dataset has no car detections; pass a manual scale in that case.
SceneScale estimate_scale(
  const std::vector<Track> & tracks, const VehicleDims & dims, double fps);

/// Pixel center to world-frame meters.
Vec2 to_world(const TrackSample & sample, const SceneScale & scale);

/// Derives world-frame kinematic states for one track. A state is produced
/// for every sample that has a sample exactly `stride` frames earlier; raw
/// velocities are then smoothed by a centered moving average over `window`
/// states (window must be odd), truncated at the track ends.
std::vector<KinematicState> derive_kinematics(
  const Track & track, const SceneScale & scale, int stride = 1, int window = 5);

}  // namespace uavrisk
