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

// Tracking quality (MOTA over IoU-matched detections, with match continuity
// across frames) and risk-detection quality (confusion counts over pair-frame
// criticality labels).

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "uavrisk/trajectory_io.hpp"

namespace uavrisk
{

struct MotaResult
{
  std::int64_t misses{0};
  std::int64_t false_positives{0};
  std::int64_t id_switches{0};
  std::int64_t gt_count{0};
  double mota{0.0};  // 1 - (FN + FP + IDSW) / GT; may be negative
};

struct ConfusionCounts
{
  std::int64_t tp{0};
  std::int64_t fp{0};
  std::int64_t tn{0};
  std::int64_t fn{0};

  [[nodiscard]] std::int64_t total() const { return tp + fp + tn + fn; }
  [[nodiscard]] double accuracy() const;
  [[nodiscard]] double tpr() const;  // tp / (tp + fn)
  [[nodiscard]] double fpr() const;  // fp / (fp + tn)
  [[nodiscard]] double fnr() const;  // fn / (tp + fn)
};

/// Intersection-over-union of two pixel boxes.
double box_iou(const Detection & a, const Detection & b);

/// Match state carried across frames of one scene.
struct MatchState
{
  std::map<std::int64_t, std::int64_t> active;           // gt id -> hyp id, previous frame
  std::map<std::int64_t, std::int64_t> last_hyp_for_gt;  // gt id -> last matched hyp id
};

struct FrameMatchResult
{
  std::vector<std::pair<std::int64_t, std::int64_t>> matches;  // (gt id, hyp id)
  std::int64_t misses{0};
  std::int64_t false_positives{0};
  std::int64_t id_switches{0};
};

/// One frame of CLEAR-style correspondence: matches surviving from the
/// previous frame are kept when their IoU still clears the threshold; the
/// remainder are matched by optimal assignment maximizing total IoU subject
/// to IoU >= threshold. Updates `state` in place.
FrameMatchResult match_detections(
  std::span<const Detection> gt_frame, std::span<const Detection> hyp_frame,
  MatchState & state, double iou_threshold);

/// Accumulates misses, false positives and id switches over all frames.
/// Throws ValidationError when the ground truth is empty.
MotaResult compute_mota(
  const std::vector<Detection> & gt, const std::vector<Detection> & hyp,
  double iou_threshold = 0.5);

/// Key space for pair-frame criticality labels.
using PairFrameKey = std::tuple<std::int64_t, std::int64_t, std::int64_t>;  // frame, id_a, id_b
using PairFrameLabels = std::map<PairFrameKey, bool>;  // true = critical

/// Confusion counts with critical as the positive class. The two label sets
/// must cover the same keys; otherwise a ValidationError lists the missing
/// keys.
ConfusionCounts risk_confusion(const PairFrameLabels & gt, const PairFrameLabels & predicted);

}  // namespace uavrisk
