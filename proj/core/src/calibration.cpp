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

#include "uavrisk/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uavrisk/errors.hpp"

namespace uavrisk
{

SceneScale estimate_scale(const std::vector<Track> & tracks, const VehicleDims & dims, double fps)
{
  if (dims.length_m <= 0.0 || dims.width_m <= 0.0 || dims.length_m <= dims.width_m) {
    throw std::invalid_argument("vehicle dims require length > width > 0");
  }
  if (fps <= 0.0) {
    throw std::invalid_argument("fps must be positive");
  }

  // The area-based candidate is orientation-independent for axis-aligned
  // boxes of rotated vehicles; the median rejects outliers.
  std::vector<double> candidates;
  const double footprint = dims.length_m * dims.width_m;
  for (const auto & track : tracks) {
    if (track.category != "car") {
      continue;
    }
    for (const auto & s : track.samples) {
      candidates.push_back(std::sqrt(footprint / (s.bb_width_px * s.bb_height_px)));
    }
  }

  if (candidates.empty()) {
    throw EstimationError(
      "no car detections available for scale estimation; pass a manual scale (--scale)");
  }

  std::sort(candidates.begin(), candidates.end());
  const std::size_t n = candidates.size();
  const double median = (n % 2 == 1)
    ? candidates[n / 2]
    : (candidates[n / 2 - 1] + candidates[n / 2]) / 2.0;

  return {median, fps, ScaleSource::estimated};
}

Vec2 to_world(const TrackSample & sample, const SceneScale & scale)
{
  return {sample.center_x_px * scale.meters_per_pixel,
          sample.center_y_px * scale.meters_per_pixel};
}

std::vector<KinematicState> derive_kinematics(
  const Track & track, const SceneScale & scale, int stride, int window)
{
  if (scale.meters_per_pixel <= 0.0 || scale.fps <= 0.0) {
    throw std::invalid_argument("scale requires meters_per_pixel > 0 and fps > 0");
  }
  if (stride < 1) {
    throw std::invalid_argument("stride must be >= 1");
  }
  if (window < 1 || window % 2 == 0) {
    throw std::invalid_argument("smoothing window must be odd and >= 1");
  }

  const auto & samples = track.samples;
  std::vector<Vec2> positions(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    positions[i] = to_world(samples[i], scale);
  }

  // Raw velocity at sample i requires a sample exactly `stride` frames
  // earlier; gaps simply yield no state.
  struct Raw
  {
    std::size_t sample_index;
    Vec2 velocity;
  };
  std::vector<Raw> raw;
  const double rate = scale.fps / static_cast<double>(stride);
  std::size_t j = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const std::int64_t want = samples[i].frame - stride;
    while (j < i && samples[j].frame < want) {
      ++j;
    }
    if (j < i && samples[j].frame == want) {
      raw.push_back({i, (positions[i] - positions[j]) * rate});
    }
  }

  // Centered moving average over the state sequence, truncated at the ends.
  const int half = window / 2;
  std::vector<KinematicState> states;
  states.reserve(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const std::size_t lo = k >= static_cast<std::size_t>(half) ? k - half : 0;
    const std::size_t hi = std::min(raw.size() - 1, k + static_cast<std::size_t>(half));
    Vec2 sum;
    for (std::size_t m = lo; m <= hi; ++m) {
      sum = sum + raw[m].velocity;
    }
    const Vec2 smoothed = sum / static_cast<double>(hi - lo + 1);
    states.push_back({samples[raw[k].sample_index].frame, positions[raw[k].sample_index],
                      smoothed, smoothed.norm()});
  }
  return states;
}

}  // namespace uavrisk
