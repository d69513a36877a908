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

#include "uavrisk/ttc.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <tuple>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "uavrisk/errors.hpp"

namespace uavrisk
{
namespace
{

using testing::assess_frame_all_pairs;
using testing::make_state;
using testing::random_frame;

TEST(PairGeometryTest, HeadOnApproach)
{
  const auto g = pair_geometry(make_state(1, 0, 0, 0, 0), make_state(2, 10, 0, -4, 0));
  EXPECT_DOUBLE_EQ(g.distance, 10.0);
  EXPECT_DOUBLE_EQ(g.rel_speed, 4.0);
  EXPECT_DOUBLE_EQ(g.closing_speed, 4.0);
  EXPECT_EQ(g.rel_velocity, (Vec2{-4.0, 0.0}));
}

TEST(PairGeometryTest, ThreeFourFiveRelativeSpeed)
{
  const auto g = pair_geometry(make_state(1, 0, 0, 3, 0), make_state(2, 10, 0, 0, 4));
  EXPECT_DOUBLE_EQ(g.rel_speed, 5.0);
  EXPECT_NEAR(g.alpha, std::numbers::pi / 2.0, 1e-12);
}

TEST(PairGeometryTest, IdenticalVelocities)
{
  const auto g = pair_geometry(make_state(1, 0, 0, 3, 2), make_state(2, 5, 5, 3, 2));
  EXPECT_DOUBLE_EQ(g.rel_speed, 0.0);
  EXPECT_DOUBLE_EQ(g.closing_speed, 0.0);
}

TEST(PairGeometryTest, CoincidentPositionsDegenerate)
{
  const auto g = pair_geometry(make_state(1, 5, 5, 1, 0), make_state(2, 5, 5, -1, 0));
  EXPECT_DOUBLE_EQ(g.distance, 0.0);
  EXPECT_DOUBLE_EQ(g.closing_speed, g.rel_speed);
  EXPECT_DOUBLE_EQ(g.theta, 0.0);
}

TEST(PairGeometryTest, RequiresSameFrameAndDistinctIds)
{
  auto a = make_state(1, 0, 0, 0, 0, 1);
  auto b = make_state(2, 1, 0, 0, 0, 2);
  EXPECT_THROW(pair_geometry(a, b), std::invalid_argument);
  b = make_state(1, 1, 0, 0, 0, 1);
  EXPECT_THROW(pair_geometry(a, b), std::invalid_argument);
}

TEST(LawOfCosines, KnownValues)
{
  EXPECT_NEAR(rel_speed_law_of_cosines(3, 4, std::numbers::pi / 2.0), 5.0, 1e-12);
  EXPECT_DOUBLE_EQ(rel_speed_law_of_cosines(5, 5, 0.0), 0.0);
  EXPECT_NEAR(rel_speed_law_of_cosines(3, 4, std::numbers::pi / 3.0), std::sqrt(13.0), 1e-12);
}

TEST(LawOfCosines, MatchesVectorNorm)
{
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> vel(-15.0, 15.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 va{vel(rng), vel(rng)};
    const Vec2 vb{vel(rng), vel(rng)};
    const double expected = (vb - va).norm();
    const double alpha = angle_between(va, vb);
    EXPECT_NEAR(rel_speed_law_of_cosines(va.norm(), vb.norm(), alpha), expected, 1e-9);
  }
}

TEST(TimeToCollision, HeadOnBothModes)
{
  const auto g = pair_geometry(make_state(1, 0, 0, 0, 0), make_state(2, 10, 0, -4, 0));
  ASSERT_TRUE(time_to_collision(g, TtcMode::projected).has_value());
  EXPECT_DOUBLE_EQ(*time_to_collision(g, TtcMode::projected), 2.5);
  ASSERT_TRUE(time_to_collision(g, TtcMode::literal).has_value());
  EXPECT_DOUBLE_EQ(*time_to_collision(g, TtcMode::literal), 2.5);
}

TEST(TimeToCollision, ModesDivergeOffAxis)
{
  // b moves (-3, 4): closing speed 3, relative speed 5.
  const auto g = pair_geometry(make_state(1, 0, 0, 0, 0), make_state(2, 10, 0, -3, 4));
  EXPECT_NEAR(g.theta, std::acos(3.0 / 5.0), 1e-12);  // rel velocity vs the b->a line
  ASSERT_TRUE(time_to_collision(g, TtcMode::projected).has_value());
  EXPECT_NEAR(*time_to_collision(g, TtcMode::projected), 10.0 / 3.0, 1e-12);
  ASSERT_TRUE(time_to_collision(g, TtcMode::literal).has_value());
  EXPECT_NEAR(*time_to_collision(g, TtcMode::literal), 2.0, 1e-12);
}

TEST(TimeToCollision, RecedingPairHasNoTtc)
{
  const auto g = pair_geometry(make_state(1, 0, 0, 0, 0), make_state(2, 10, 0, 4, 0));
  EXPECT_FALSE(time_to_collision(g, TtcMode::projected).has_value());
  EXPECT_FALSE(time_to_collision(g, TtcMode::literal).has_value());
}

TEST(TimeToCollision, LiteralRequiresClosingMotion)
{
  // Perpendicular fly-by through the line between centers: rel speed is
  // nonzero but the gap is not shrinking.
  const auto g = pair_geometry(make_state(1, 0, 0, 0, 0), make_state(2, 10, 0, 0, 5));
  EXPECT_FALSE(time_to_collision(g, TtcMode::literal).has_value());
}

TEST(TimeToCollision, CoincidentClosingPairIsZero)
{
  const auto g = pair_geometry(make_state(1, 5, 5, 1, 0), make_state(2, 5, 5, -1, 0));
  ASSERT_TRUE(time_to_collision(g, TtcMode::projected).has_value());
  EXPECT_DOUBLE_EQ(*time_to_collision(g, TtcMode::projected), 0.0);
  const auto still = pair_geometry(make_state(1, 5, 5, 1, 0), make_state(2, 5, 5, 1, 0));
  EXPECT_FALSE(time_to_collision(still, TtcMode::projected).has_value());
}

TEST(ClassifyCritical, StrictThreshold)
{
  EXPECT_FALSE(classify_critical(2.5, 2.5));
  EXPECT_TRUE(classify_critical(1.8, 2.5));
  EXPECT_TRUE(classify_critical(2.4, 2.5));
  EXPECT_FALSE(classify_critical(std::nullopt, 2.5));
  EXPECT_THROW(classify_critical(1.0, 0.0), std::invalid_argument);
}

TEST(AssessFrame, RadiusFiltersPairs)
{
  const std::vector<AgentState> states = {make_state(1, 0, 0, 1, 0), make_state(2, 40, 0, -1, 0)};
  EXPECT_TRUE(assess_frame(states, {30.0, 2.5, TtcMode::projected}).empty());
  EXPECT_EQ(assess_frame(states, {40.0, 2.5, TtcMode::projected}).size(), 1u);
}

TEST(AssessFrame, UnboundedRadiusYieldsAllPairs)
{
  std::mt19937_64 rng(3);
  const auto states = random_frame(rng, 10, 100.0, 10.0);
  const AssessParams params{std::numeric_limits<double>::infinity(), 2.5, TtcMode::projected};
  EXPECT_EQ(assess_frame(states, params).size(), 45u);  // C(10, 2)
}

TEST(AssessFrame, OutputSortedByIdPair)
{
  std::mt19937_64 rng(5);
  const auto states = random_frame(rng, 30, 50.0, 10.0);
  const auto records = assess_frame(states, {100.0, 2.5, TtcMode::projected});
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto & p = records[i - 1].geometry;
    const auto & q = records[i].geometry;
    EXPECT_TRUE(std::tie(p.id_a, p.id_b) < std::tie(q.id_a, q.id_b));
  }
  for (const auto & r : records) {
    EXPECT_LT(r.geometry.id_a, r.geometry.id_b);
  }
}

TEST(AssessFrame, MatchesAllPairsReference)
{
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto states = random_frame(rng, 200, 400.0, 15.0);
    const AssessParams params{30.0, 2.5, TtcMode::projected};
    EXPECT_EQ(assess_frame(states, params), assess_frame_all_pairs(states, params));
  }
}

TEST(AssessFrame, RejectsDuplicateIdentity)
{
  const std::vector<AgentState> states = {make_state(1, 0, 0, 1, 0), make_state(1, 5, 0, 1, 0)};
  EXPECT_THROW(assess_frame(states, {30.0, 2.5, TtcMode::projected}), ValidationError);
}

TEST(TtcProperties, PairSymmetry)
{
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  std::uniform_real_distribution<double> vel(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const auto a = make_state(1, coord(rng), coord(rng), vel(rng), vel(rng));
    const auto b = make_state(2, coord(rng), coord(rng), vel(rng), vel(rng));
    const auto g_ab = pair_geometry(a, b);
    const auto g_ba = pair_geometry(b, a);
    EXPECT_DOUBLE_EQ(g_ab.distance, g_ba.distance);
    EXPECT_DOUBLE_EQ(g_ab.rel_speed, g_ba.rel_speed);
    EXPECT_NEAR(g_ab.closing_speed, g_ba.closing_speed, 1e-12);
    EXPECT_EQ(g_ab.rel_velocity, (Vec2{-g_ba.rel_velocity.x, -g_ba.rel_velocity.y}));
    const auto t_ab = time_to_collision(g_ab, TtcMode::projected);
    const auto t_ba = time_to_collision(g_ba, TtcMode::projected);
    EXPECT_EQ(t_ab.has_value(), t_ba.has_value());
    if (t_ab && t_ba) {
      EXPECT_NEAR(*t_ab, *t_ba, 1e-9);
    }
  }
}

TEST(TtcProperties, ClosingSpeedBoundedByRelSpeed)
{
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  std::uniform_real_distribution<double> vel(-10.0, 10.0);
  for (int i = 0; i < 500; ++i) {
    const auto g = pair_geometry(make_state(1, coord(rng), coord(rng), vel(rng), vel(rng)),
                                 make_state(2, coord(rng), coord(rng), vel(rng), vel(rng)));
    EXPECT_LE(std::abs(g.closing_speed), g.rel_speed + 1e-12);
    EXPECT_GE(g.distance, 0.0);
  }
}

TEST(TtcProperties, ScaleInvariance)
{
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  std::uniform_real_distribution<double> vel(-10.0, 10.0);
  for (const double c : {0.1, 10.0}) {
    for (int i = 0; i < 200; ++i) {
      const auto a = make_state(1, coord(rng), coord(rng), vel(rng), vel(rng));
      const auto b = make_state(2, coord(rng), coord(rng), vel(rng), vel(rng));
      const auto scale = [c](const AgentState & s) {
        return AgentState{s.id,
                          {s.state.frame,
                           s.state.position * c,
                           s.state.velocity * c,
                           (s.state.velocity * c).norm()}};
      };
      const auto t1 = time_to_collision(pair_geometry(a, b), TtcMode::projected);
      const auto t2 = time_to_collision(pair_geometry(scale(a), scale(b)), TtcMode::projected);
      ASSERT_EQ(t1.has_value(), t2.has_value());
      if (t1 && t2) {
        EXPECT_NEAR(*t1, *t2, 1e-9);
      }
    }
  }
}

}  // namespace
}  // namespace uavrisk
