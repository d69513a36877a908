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

// Feature extraction for next-step risk prediction. For a studied car and a
// target frame, each of the five preceding steps contributes the car's own
// kinematics and safety condition plus the state of its dangerous neighbor
// (the neighbor with the smallest TTC at that step). The label comes from the
// car's minimum TTC at the target frame itself.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uavrisk/calibration.hpp"
#include "uavrisk/forest.hpp"
#include "uavrisk/ttc.hpp"

namespace uavrisk
{

inline constexpr double kTtcSentinel = 99.0;       // s, caps the pair-TTC feature
inline constexpr double kDistanceSentinel = 999.0; // m, caps the pair-distance feature

class FeatureExtractor
{
public:
  FeatureExtractor(
    const std::map<std::int64_t, std::vector<KinematicState>> & kinematics_by_id,
    const std::map<std::int64_t, std::string> & categories_by_id,
    std::span<const TtcRecord> records,
    double ttc_threshold);

  /// Feature vector and label for `id` at `frame`, or empty when the id lacks
  /// a state at the frame or at any of the five preceding frames. Throws
  /// ValidationError when the id is not a car.
  [[nodiscard]] std::optional<FeatureSample> extract(std::int64_t id, std::int64_t frame) const;

  /// All extractable samples over every car and frame, in (id, frame) order.
  [[nodiscard]] std::vector<FeatureSample> build_dataset() const;

private:
  struct StepInfo
  {
    std::optional<double> min_ttc;  // smallest present TTC among the id's pairs
    std::int64_t dangerous_partner{-1};
    double pair_distance{0.0};
    bool critical{false};  // any critical pair involving the id
  };

  using Key = std::pair<std::int64_t, std::int64_t>;  // (id, frame)

  [[nodiscard]] const KinematicState * state_at(std::int64_t id, std::int64_t frame) const;
  [[nodiscard]] const StepInfo * step_at(std::int64_t id, std::int64_t frame) const;

  const std::map<std::int64_t, std::vector<KinematicState>> & kinematics_;
  const std::map<std::int64_t, std::string> & categories_;
  double threshold_;
  std::map<Key, const KinematicState *> state_index_;
  std::map<Key, StepInfo> step_index_;
};

}  // namespace uavrisk
