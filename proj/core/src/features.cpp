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

#include "uavrisk/features.hpp"

#include <algorithm>

#include "uavrisk/errors.hpp"

namespace uavrisk
{

FeatureExtractor::FeatureExtractor(
  const std::map<std::int64_t, std::vector<KinematicState>> & kinematics_by_id,
  const std::map<std::int64_t, std::string> & categories_by_id,
  std::span<const TtcRecord> records,
  double ttc_threshold)
: kinematics_(kinematics_by_id), categories_(categories_by_id), threshold_(ttc_threshold)
{
  for (const auto & [id, states] : kinematics_) {
    for (const auto & s : states) {
      state_index_[{id, s.frame}] = &s;
    }
  }

  for (const auto & rec : records) {
    if (!rec.ttc.has_value()) {
      continue;
    }
    const double ttc = *rec.ttc;
    const auto update = [&](std::int64_t id, std::int64_t partner) {
      auto & info = step_index_[{id, rec.geometry.frame}];
      if (!info.min_ttc.has_value() || ttc < *info.min_ttc ||
          (ttc == *info.min_ttc && partner < info.dangerous_partner)) {
        info.min_ttc = ttc;
        info.dangerous_partner = partner;
        info.pair_distance = rec.geometry.distance;
      }
      info.critical = info.critical || ttc < threshold_;
    };
    update(rec.geometry.id_a, rec.geometry.id_b);
    update(rec.geometry.id_b, rec.geometry.id_a);
  }
}

const KinematicState * FeatureExtractor::state_at(std::int64_t id, std::int64_t frame) const
{
  const auto it = state_index_.find({id, frame});
  return it != state_index_.end() ? it->second : nullptr;
}

const FeatureExtractor::StepInfo * FeatureExtractor::step_at(
  std::int64_t id, std::int64_t frame) const
{
  const auto it = step_index_.find({id, frame});
  return it != step_index_.end() ? &it->second : nullptr;
}

std::optional<FeatureSample> FeatureExtractor::extract(std::int64_t id, std::int64_t frame) const
{
  const auto cat = categories_.find(id);
  if (cat == categories_.end() || cat->second != "car") {
    throw ValidationError("risk prediction studies cars only; id " + std::to_string(id) +
                          " is not a car");
  }

  // The studied car needs a state at the target frame and at all five
  // preceding frames.
  if (state_at(id, frame) == nullptr) {
    return std::nullopt;
  }
  for (int offset = 1; offset <= kHistorySteps; ++offset) {
    if (state_at(id, frame - offset) == nullptr) {
      return std::nullopt;
    }
  }

  FeatureSample sample;
  int slot = 0;
  for (int offset = kHistorySteps; offset >= 1; --offset) {  // oldest step first
    const std::int64_t step_frame = frame - offset;
    const KinematicState & own = *state_at(id, step_frame);
    const StepInfo * info = step_at(id, step_frame);

    sample.features[slot++] = own.speed;
    sample.features[slot++] = own.position.x;
    sample.features[slot++] = own.position.y;
    sample.features[slot++] = (info != nullptr && info->critical) ? 1.0 : 0.0;

    const KinematicState * neighbor = nullptr;
    if (info != nullptr && info->min_ttc.has_value()) {
      neighbor = state_at(info->dangerous_partner, step_frame);
    }
    if (neighbor != nullptr) {
      const StepInfo * neighbor_info = step_at(info->dangerous_partner, step_frame);
      const bool neighbor_critical = neighbor_info != nullptr && neighbor_info->critical;
      sample.features[slot++] = neighbor->speed;
      sample.features[slot++] = neighbor->position.x;
      sample.features[slot++] = neighbor->position.y;
      sample.features[slot++] = neighbor_critical ? 1.0 : 0.0;
      sample.features[slot++] = std::min(*info->min_ttc, kTtcSentinel);
      sample.features[slot++] = std::min(info->pair_distance, kDistanceSentinel);
    } else {
      // No neighbor with a positive TTC at this step: sentinel slot.
      sample.features[slot++] = own.speed;
      sample.features[slot++] = own.position.x;
      sample.features[slot++] = own.position.y;
      sample.features[slot++] = 0.0;
      sample.features[slot++] = kTtcSentinel;
      sample.features[slot++] = kDistanceSentinel;
    }
  }

  const StepInfo * now = step_at(id, frame);
  const bool risky_now =
    now != nullptr && now->min_ttc.has_value() && *now->min_ttc < threshold_;
  sample.label = risky_now ? SafetyLabel::risky : SafetyLabel::safe;
  return sample;
}

std::vector<FeatureSample> FeatureExtractor::build_dataset() const
{
  std::vector<FeatureSample> out;
  for (const auto & [id, states] : kinematics_) {
    const auto cat = categories_.find(id);
    if (cat == categories_.end() || cat->second != "car") {
      continue;
    }
    for (const auto & s : states) {
      if (auto sample = extract(id, s.frame)) {
        out.push_back(std::move(*sample));
      }
    }
  }
  return out;
}

}  // namespace uavrisk
