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

// Synthetic constant-velocity scenarios with analytically known TTCs. These
// generate annotation files the parser accepts, and provide two independent
// ground-truth TTC oracles: a closed-form one and a small step simulation.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uavrisk/geometry.hpp"

namespace uavrisk
{

struct AgentSpec
{
  std::int64_t id{0};
  std::string category{"car"};
  Vec2 start_position;  // meters, at start_frame
  Vec2 velocity;        // m/s
  std::int64_t start_frame{1};
  std::int64_t end_frame{2};  // inclusive; must exceed start_frame
};

struct ScenarioSpec
{
  double fps{30.0};
  double scale{0.05};   // m/px
  std::vector<AgentSpec> agents;
  double noise_px{0.0}; // Gaussian pixel jitter std dev
  std::uint64_t seed{0};
};

/// Scenario clock: frame f corresponds to t = (f - 1) / fps seconds.
double frame_time(std::int64_t frame, double fps);

/// Agent position at scenario time t (constant-velocity motion from its
/// start frame).
Vec2 agent_position(const AgentSpec & agent, double t, double fps);

[[nodiscard]] bool agent_active(const AgentSpec & agent, std::int64_t frame);

/// Renders the scenario as annotation text parseable by parse_annotations.
/// Boxes are sized per category; jitter is seeded and deterministic. Throws
/// ValidationError on duplicate agent ids or invalid parameters.
std::string generate_scenario(const ScenarioSpec & spec);

/// Closed-form TTC of two constant-velocity agents evaluated at scenario
/// time t, or empty when the pair is not closing. For collinear closing
/// pairs this equals the exact gap-closure time.
std::optional<double> analytic_ttc(
  const AgentSpec & a, const AgentSpec & b, double t, double fps);

/// Independent numeric oracle: steps both agents forward from time t and
/// returns the first step time at which the centers would coincide within
/// one step (distance <= dt * closing speed), or empty if the distance never
/// decreases to that point within the horizon.
std::optional<double> brute_force_ttc(
  const AgentSpec & a, const AgentSpec & b, double t, double fps,
  double dt = 1e-3, double horizon = 60.0);

/// ScenarioSpec JSON round trip (the `synth` subcommand input format).
ScenarioSpec parse_scenario(const std::string & json_text);
std::string serialize_scenario(const ScenarioSpec & spec);

}  // namespace uavrisk
