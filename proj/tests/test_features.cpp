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

#include <gtest/gtest.h>

#include "uavrisk/errors.hpp"

namespace uavrisk
{
namespace
{

std::vector<KinematicState> straight_states(
  std::int64_t first_frame, std::int64_t last_frame, Vec2 start, Vec2 velocity, double fps)
{
  std::vector<KinematicState> states;
  for (std::int64_t f = first_frame; f <= last_frame; ++f) {
    const double t = static_cast<double>(f - first_frame) / fps;
    states.push_back({f, start + velocity * t, velocity, velocity.norm()});
  }
  return states;
}

TtcRecord pair_record(
  std::int64_t frame, std::int64_t id_a, std::int64_t id_b, double ttc, double distance,
  double threshold = 2.5)
{
  TtcRecord rec;
  rec.geometry.frame = frame;
  rec.geometry.id_a = id_a;
  rec.geometry.id_b = id_b;
  rec.geometry.distance = distance;
  rec.ttc = ttc;
  rec.critical = ttc < threshold;
  return rec;
}

TEST(FeatureExtractorTest, IsolatedCarUsesSentinels)
{
  std::map<std::int64_t, std::vector<KinematicState>> kin;
  kin[1] = straight_states(1, 10, {0, 0}, {5, 0}, 10.0);
  const std::map<std::int64_t, std::string> cats = {{1, "car"}};

  const FeatureExtractor extractor(kin, cats, {}, 2.5);
  const auto sample = extractor.extract(1, 7);
  ASSERT_TRUE(sample.has_value());
  EXPECT_EQ(sample->label, SafetyLabel::safe);

  for (int step = 0; step < kHistorySteps; ++step) {
    const int base = step * kFeaturesPerStep;
    EXPECT_DOUBLE_EQ(sample->features[base + 0], 5.0);        // own speed
    EXPECT_DOUBLE_EQ(sample->features[base + 3], 0.0);        // own critical flag
    // Sentinel neighbor: copies own kinematics, flag 0, capped ttc/distance.
    EXPECT_DOUBLE_EQ(sample->features[base + 4], 5.0);
    EXPECT_DOUBLE_EQ(sample->features[base + 5], sample->features[base + 1]);
    EXPECT_DOUBLE_EQ(sample->features[base + 6], sample->features[base + 2]);
    EXPECT_DOUBLE_EQ(sample->features[base + 7], 0.0);
    EXPECT_DOUBLE_EQ(sample->features[base + 8], kTtcSentinel);
    EXPECT_DOUBLE_EQ(sample->features[base + 9], kDistanceSentinel);
  }
}

TEST(FeatureExtractorTest, LabelFromMinTtcAtTargetFrame)
{
  std::map<std::int64_t, std::vector<KinematicState>> kin;
  kin[1] = straight_states(1, 10, {0, 0}, {5, 0}, 10.0);
  kin[2] = straight_states(1, 10, {20, 0}, {-5, 0}, 10.0);
  const std::map<std::int64_t, std::string> cats = {{1, "car"}, {2, "car"}};

  // Safe at frame 7 (min TTC 3.0 > 2.5).
  {
    const std::vector<TtcRecord> records = {pair_record(7, 1, 2, 3.0, 12.0)};
    const FeatureExtractor extractor(kin, cats, records, 2.5);
    const auto sample = extractor.extract(1, 7);
    ASSERT_TRUE(sample.has_value());
    EXPECT_EQ(sample->label, SafetyLabel::safe);
  }
  // Risky at frame 7 (min TTC 2.0 < 2.5).
  {
    const std::vector<TtcRecord> records = {pair_record(7, 1, 2, 2.0, 8.0)};
    const FeatureExtractor extractor(kin, cats, records, 2.5);
    const auto sample = extractor.extract(1, 7);
    ASSERT_TRUE(sample.has_value());
    EXPECT_EQ(sample->label, SafetyLabel::risky);
  }
}

TEST(FeatureExtractorTest, DangerousNeighborIsSmallestTtc)
{
  std::map<std::int64_t, std::vector<KinematicState>> kin;
  kin[1] = straight_states(1, 10, {0, 0}, {5, 0}, 10.0);
  kin[2] = straight_states(1, 10, {20, 0}, {-5, 0}, 10.0);
  kin[3] = straight_states(1, 10, {0, 15}, {0, -3}, 10.0);
  const std::map<std::int64_t, std::string> cats = {{1, "car"}, {2, "car"}, {3, "van"}};

  // At frame 6 (step t-1 of target frame 7), neighbor 3 is more urgent.
  const std::vector<TtcRecord> records = {
    pair_record(6, 1, 2, 2.2, 10.0), pair_record(6, 1, 3, 1.1, 9.0)};
  const FeatureExtractor extractor(kin, cats, records, 2.5);
  const auto sample = extractor.extract(1, 7);
  ASSERT_TRUE(sample.has_value());

  const int base = 4 * kFeaturesPerStep;  // most recent step
  EXPECT_DOUBLE_EQ(sample->features[base + 4], 3.0);  // neighbor 3 speed
  EXPECT_DOUBLE_EQ(sample->features[base + 8], 1.1);  // pair ttc
  EXPECT_DOUBLE_EQ(sample->features[base + 9], 9.0);  // pair distance
  EXPECT_DOUBLE_EQ(sample->features[base + 3], 1.0);  // own critical at that step
}

TEST(FeatureExtractorTest, MissingHistoryYieldsNoSample)
{
  std::map<std::int64_t, std::vector<KinematicState>> kin;
  kin[1] = straight_states(3, 10, {0, 0}, {5, 0}, 10.0);
  const std::map<std::int64_t, std::string> cats = {{1, "car"}};
  const FeatureExtractor extractor(kin, cats, {}, 2.5);
  EXPECT_FALSE(extractor.extract(1, 7).has_value());  // needs frames 2..6
  EXPECT_TRUE(extractor.extract(1, 8).has_value());
  EXPECT_FALSE(extractor.extract(1, 20).has_value());  // no state at target
}

TEST(FeatureExtractorTest, NonCarIsRejected)
{
  std::map<std::int64_t, std::vector<KinematicState>> kin;
  kin[1] = straight_states(1, 10, {0, 0}, {1, 0}, 10.0);
  const std::map<std::int64_t, std::string> cats = {{1, "pedestrian"}};
  const FeatureExtractor extractor(kin, cats, {}, 2.5);
  EXPECT_THROW(static_cast<void>(extractor.extract(1, 7)), ValidationError);
}

TEST(FeatureExtractorTest, DatasetCoversCarsOnly)
{
  std::map<std::int64_t, std::vector<KinematicState>> kin;
  kin[1] = straight_states(1, 12, {0, 0}, {5, 0}, 10.0);
  kin[2] = straight_states(1, 12, {50, 0}, {1, 0}, 10.0);
  const std::map<std::int64_t, std::string> cats = {{1, "car"}, {2, "pedestrian"}};
  const FeatureExtractor extractor(kin, cats, {}, 2.5);
  const auto dataset = extractor.build_dataset();
  // Car 1 has 12 states; frames 6..12 have a full 5-frame history.
  EXPECT_EQ(dataset.size(), 7u);
}

TEST(FeatureExtractorTest, TtcAndDistanceAreCapped)
{
  std::map<std::int64_t, std::vector<KinematicState>> kin;
  kin[1] = straight_states(1, 10, {0, 0}, {5, 0}, 10.0);
  kin[2] = straight_states(1, 10, {20, 0}, {-5, 0}, 10.0);
  const std::map<std::int64_t, std::string> cats = {{1, "car"}, {2, "car"}};
  std::vector<TtcRecord> records;
  for (std::int64_t f = 1; f <= 10; ++f) {
    records.push_back(pair_record(f, 1, 2, 500.0, 5000.0));
  }
  const FeatureExtractor extractor(kin, cats, records, 2.5);
  const auto sample = extractor.extract(1, 7);
  ASSERT_TRUE(sample.has_value());
  EXPECT_DOUBLE_EQ(sample->features[8], kTtcSentinel);
  EXPECT_DOUBLE_EQ(sample->features[9], kDistanceSentinel);
}

}  // namespace
}  // namespace uavrisk
