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

#include "uavrisk/evaluation.hpp"

#include <random>
#include <set>

#include <gtest/gtest.h>

#include "uavrisk/errors.hpp"

namespace uavrisk
{
namespace
{

Detection box(std::int64_t frame, std::int64_t id, double left, double top, double w = 10,
              double h = 10)
{
  Detection d;
  d.frame = frame;
  d.id = id;
  d.bb_left = left;
  d.bb_top = top;
  d.bb_width = w;
  d.bb_height = h;
  d.category = 4;
  return d;
}

TEST(BoxIou, KnownOverlaps)
{
  EXPECT_DOUBLE_EQ(box_iou(box(1, 1, 0, 0), box(1, 2, 0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(box_iou(box(1, 1, 0, 0), box(1, 2, 20, 20)), 0.0);
  // Half-width shift: intersection 50, union 150.
  EXPECT_NEAR(box_iou(box(1, 1, 0, 0), box(1, 2, 5, 0)), 50.0 / 150.0, 1e-12);
}

TEST(MatchDetections, IdenticalBoxesAllMatch)
{
  const std::vector<Detection> gt = {box(1, 1, 0, 0), box(1, 2, 100, 0)};
  const std::vector<Detection> hyp = {box(1, 11, 0, 0), box(1, 12, 100, 0)};
  MatchState state;
  const auto result = match_detections(gt, hyp, state, 0.5);
  EXPECT_EQ(result.matches.size(), 2u);
  EXPECT_EQ(result.misses, 0);
  EXPECT_EQ(result.false_positives, 0);
  EXPECT_EQ(result.id_switches, 0);
}

TEST(MatchDetections, DisjointBoxesAreMissesAndFalsePositives)
{
  const std::vector<Detection> gt = {box(1, 1, 0, 0), box(1, 2, 100, 0)};
  const std::vector<Detection> hyp = {box(1, 11, 500, 500), box(1, 12, 600, 600)};
  MatchState state;
  const auto result = match_detections(gt, hyp, state, 0.5);
  EXPECT_TRUE(result.matches.empty());
  EXPECT_EQ(result.misses, 2);
  EXPECT_EQ(result.false_positives, 2);
}

TEST(MatchDetections, HypIdChangeIsIdSwitch)
{
  MatchState state;
  const std::vector<Detection> gt1 = {box(1, 1, 0, 0)};
  const std::vector<Detection> hyp1 = {box(1, 11, 0, 0)};
  auto r1 = match_detections(gt1, hyp1, state, 0.5);
  EXPECT_EQ(r1.id_switches, 0);

  const std::vector<Detection> gt2 = {box(2, 1, 0, 0)};
  const std::vector<Detection> hyp2 = {box(2, 12, 0, 0)};
  auto r2 = match_detections(gt2, hyp2, state, 0.5);
  EXPECT_EQ(r2.id_switches, 1);

  // Same hyp id again: no further switch.
  const std::vector<Detection> gt3 = {box(3, 1, 0, 0)};
  const std::vector<Detection> hyp3 = {box(3, 12, 0, 0)};
  auto r3 = match_detections(gt3, hyp3, state, 0.5);
  EXPECT_EQ(r3.id_switches, 0);
}

TEST(MatchDetections, PersistentMatchBeatsBetterIou)
{
  // gt 1 was matched to hyp 11; a closer hyp 12 appears, but the existing
  // correspondence persists while above the threshold.
  MatchState state;
  const std::vector<Detection> gt1 = {box(1, 1, 0, 0)};
  const std::vector<Detection> hyp1 = {box(1, 11, 2, 0)};
  match_detections(gt1, hyp1, state, 0.3);

  const std::vector<Detection> gt2 = {box(2, 1, 0, 0)};
  const std::vector<Detection> hyp2 = {box(2, 12, 0, 0), box(2, 11, 2, 0)};
  const auto r2 = match_detections(gt2, hyp2, state, 0.3);
  ASSERT_EQ(r2.matches.size(), 1u);
  EXPECT_EQ(r2.matches[0].second, 11);
  EXPECT_EQ(r2.id_switches, 0);
}

TEST(MatchDetections, OptimalAssignmentMaximizesMatches)
{
  // Best-first greedy would take gt1-hyp11 (IoU 0.9) and leave gt2 with only
  // the below-threshold hyp12; the optimal assignment matches both pairs.
  MatchState state;
  const std::vector<Detection> gt = {box(1, 1, 0, 0), box(1, 2, 3.026, 0)};
  const std::vector<Detection> hyp = {box(1, 11, 0.526, 0), box(1, 12, -2.903, 0)};
  EXPECT_GT(box_iou(gt[0], hyp[0]), 0.89);
  EXPECT_LT(box_iou(gt[1], hyp[1]), 0.5);
  const auto result = match_detections(gt, hyp, state, 0.5);
  EXPECT_EQ(result.matches.size(), 2u);
  EXPECT_EQ(result.misses, 0);
  EXPECT_EQ(result.false_positives, 0);
}

TEST(ComputeMota, PerfectTracking)
{
  std::vector<Detection> gt;
  std::vector<Detection> hyp;
  for (std::int64_t f = 1; f <= 3; ++f) {
    gt.push_back(box(f, 1, 0, 0));
    gt.push_back(box(f, 2, 100, 0));
    hyp.push_back(box(f, 11, 0, 0));
    hyp.push_back(box(f, 12, 100, 0));
  }
  const auto result = compute_mota(gt, hyp);
  EXPECT_EQ(result.gt_count, 6);
  EXPECT_DOUBLE_EQ(result.mota, 1.0);
}

TEST(ComputeMota, OneMissedDetection)
{
  std::vector<Detection> gt;
  std::vector<Detection> hyp;
  for (std::int64_t f = 1; f <= 3; ++f) {
    gt.push_back(box(f, 1, 0, 0));
    gt.push_back(box(f, 2, 100, 0));
    hyp.push_back(box(f, 11, 0, 0));
    if (f != 2) {
      hyp.push_back(box(f, 12, 100, 0));
    }
  }
  const auto result = compute_mota(gt, hyp);
  EXPECT_EQ(result.misses, 1);
  EXPECT_NEAR(result.mota, 1.0 - 1.0 / 6.0, 1e-9);
}

TEST(ComputeMota, OneIdSwitch)
{
  std::vector<Detection> gt;
  std::vector<Detection> hyp;
  for (std::int64_t f = 1; f <= 3; ++f) {
    gt.push_back(box(f, 1, 0, 0));
    gt.push_back(box(f, 2, 100, 0));
    hyp.push_back(box(f, f == 1 ? 11 : 13, 0, 0));  // object 1 re-identified
    hyp.push_back(box(f, 12, 100, 0));
  }
  const auto result = compute_mota(gt, hyp);
  EXPECT_EQ(result.id_switches, 1);
  EXPECT_EQ(result.misses, 0);
  EXPECT_EQ(result.false_positives, 0);
  EXPECT_NEAR(result.mota, 1.0 - 1.0 / 6.0, 1e-9);
}

TEST(ComputeMota, EmptyGroundTruthIsError)
{
  EXPECT_THROW(compute_mota({}, {box(1, 1, 0, 0)}), ValidationError);
}

TEST(ComputeMota, CanBeNegative)
{
  const std::vector<Detection> gt = {box(1, 1, 0, 0)};
  const std::vector<Detection> hyp = {box(1, 11, 500, 0), box(1, 12, 600, 0),
                                      box(1, 13, 700, 0)};
  const auto result = compute_mota(gt, hyp);
  EXPECT_LT(result.mota, 0.0);
  EXPECT_LE(result.mota, 1.0);
}

TEST(MatchProperties, PartialBijectionPerFrame)
{
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> coord(0.0, 300.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Detection> gt;
    std::vector<Detection> hyp;
    for (int i = 0; i < 25; ++i) {
      gt.push_back(box(1, i, coord(rng), coord(rng)));
    }
    for (int i = 0; i < 25; ++i) {
      hyp.push_back(box(1, 100 + i, coord(rng), coord(rng)));
    }
    MatchState state;
    const auto result = match_detections(gt, hyp, state, 0.3);
    std::set<std::int64_t> gts;
    std::set<std::int64_t> hyps;
    for (const auto & [g, h] : result.matches) {
      EXPECT_TRUE(gts.insert(g).second);
      EXPECT_TRUE(hyps.insert(h).second);
    }
    EXPECT_EQ(result.misses + static_cast<std::int64_t>(result.matches.size()),
              static_cast<std::int64_t>(gt.size()));
    EXPECT_EQ(result.false_positives + static_cast<std::int64_t>(result.matches.size()),
              static_cast<std::int64_t>(hyp.size()));
  }
}

PairFrameLabels labels_from(const std::vector<std::pair<PairFrameKey, bool>> & entries)
{
  PairFrameLabels labels;
  for (const auto & [key, value] : entries) {
    labels[key] = value;
  }
  return labels;
}

TEST(RiskConfusion, RatesMatchDefinitions)
{
  PairFrameLabels gt;
  PairFrameLabels pred;
  std::int64_t key = 0;
  const auto add = [&](bool truth, bool predicted, int count) {
    for (int i = 0; i < count; ++i) {
      gt[{key, 0, 1}] = truth;
      pred[{key, 0, 1}] = predicted;
      ++key;
    }
  };
  add(true, true, 4);    // tp
  add(true, false, 1);   // fn
  add(false, true, 31);  // fp
  add(false, false, 69); // tn

  const auto counts = risk_confusion(gt, pred);
  EXPECT_EQ(counts.tp, 4);
  EXPECT_EQ(counts.fn, 1);
  EXPECT_EQ(counts.fp, 31);
  EXPECT_EQ(counts.tn, 69);
  EXPECT_EQ(counts.total(), 105);
  EXPECT_NEAR(counts.tpr(), 0.80, 1e-12);
  EXPECT_NEAR(counts.fpr(), 0.31, 1e-12);
  EXPECT_NEAR(counts.fnr(), 0.20, 1e-12);
  EXPECT_NEAR(counts.accuracy(), 73.0 / 105.0, 1e-12);
}

TEST(RiskConfusion, SelfComparisonIsPerfect)
{
  const auto labels = labels_from({{{1, 1, 2}, true}, {{1, 2, 3}, false}, {{2, 1, 2}, true}});
  const auto counts = risk_confusion(labels, labels);
  EXPECT_DOUBLE_EQ(counts.accuracy(), 1.0);
  EXPECT_DOUBLE_EQ(counts.fpr(), 0.0);
  EXPECT_EQ(counts.fn, 0);
  EXPECT_EQ(counts.fp, 0);
}

TEST(RiskConfusion, KeyMismatchIsAlignmentError)
{
  const auto gt = labels_from({{{1, 1, 2}, true}, {{2, 1, 2}, false}});
  const auto pred = labels_from({{{1, 1, 2}, true}});
  try {
    risk_confusion(gt, pred);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError & e) {
    EXPECT_NE(std::string(e.what()).find("frame 2"), std::string::npos);
  }
}

}  // namespace
}  // namespace uavrisk
