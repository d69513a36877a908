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

#include "uavrisk/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "uavrisk/errors.hpp"
#include "text_util.hpp"

namespace uavrisk
{

namespace
{

struct Footprint
{
  double length_m;
  double width_m;
};

// Nominal footprints in meters; only the car entry affects calibration.
const std::map<std::string, Footprint> & footprints()
{
  static const std::map<std::string, Footprint> table = {
    {"pedestrian", {0.6, 0.6}}, {"bicycle", {1.8, 0.6}}, {"car", {4.0, 1.7}},
    {"van", {5.0, 2.0}},        {"truck", {8.0, 2.5}},   {"bus", {12.0, 2.5}},
    {"motor", {2.0, 0.8}},      {"other", {1.0, 1.0}},   {"ignored", {1.0, 1.0}}};
  return table;
}

const std::map<std::string, std::int64_t> & category_codes()
{
  static const std::map<std::string, std::int64_t> table = {
    {"ignored", 0}, {"pedestrian", 1}, {"bicycle", 3}, {"car", 4},   {"van", 5},
    {"truck", 6},   {"bus", 9},        {"motor", 10},  {"other", 11}};
  return table;
}

void check_spec(const ScenarioSpec & spec)
{
  if (!(spec.fps > 0.0) || !(spec.scale > 0.0)) {
    throw ValidationError("scenario requires fps > 0 and scale > 0");
  }
  if (spec.noise_px < 0.0) {
    throw ValidationError("scenario noise must be >= 0");
  }
  std::set<std::int64_t> ids;
  for (const auto & agent : spec.agents) {
    if (!ids.insert(agent.id).second) {
      throw ValidationError("duplicate agent id " + std::to_string(agent.id));
    }
    if (agent.end_frame <= agent.start_frame) {
      throw ValidationError("agent " + std::to_string(agent.id) +
                            ": end frame must exceed start frame");
    }
    if (category_codes().count(agent.category) == 0) {
      throw ValidationError("agent " + std::to_string(agent.id) + ": unknown category '" +
                            agent.category + "'");
    }
  }
}

}  // namespace

double frame_time(std::int64_t frame, double fps)
{
  return static_cast<double>(frame - 1) / fps;
}

Vec2 agent_position(const AgentSpec & agent, double t, double fps)
{
  const double t0 = frame_time(agent.start_frame, fps);
  return agent.start_position + agent.velocity * (t - t0);
}

bool agent_active(const AgentSpec & agent, std::int64_t frame)
{
  return frame >= agent.start_frame && frame <= agent.end_frame;
}

std::string generate_scenario(const ScenarioSpec & spec)
{
  check_spec(spec);
  if (spec.agents.empty()) {
    return {};
  }

  auto rng = std::mt19937_64(spec.seed);
  std::normal_distribution<double> jitter(0.0, spec.noise_px);

  std::int64_t first = spec.agents.front().start_frame;
  std::int64_t last = spec.agents.front().end_frame;
  for (const auto & agent : spec.agents) {
    first = std::min(first, agent.start_frame);
    last = std::max(last, agent.end_frame);
  }

  std::string out;
  for (std::int64_t frame = first; frame <= last; ++frame) {
    const double t = frame_time(frame, spec.fps);
    for (const auto & agent : spec.agents) {
      if (!agent_active(agent, frame)) {
        continue;
      }
      const Vec2 pos = agent_position(agent, t, spec.fps);
      double cx = pos.x / spec.scale;
      double cy = pos.y / spec.scale;
      if (spec.noise_px > 0.0) {
        cx += jitter(rng);
        cy += jitter(rng);
      }
      const Footprint fp = footprints().at(agent.category);
      const double w = fp.length_m / spec.scale;
      const double h = fp.width_m / spec.scale;

      out += std::to_string(frame);
      out += ',';
      out += std::to_string(agent.id);
      out += ',';
      out += detail::format_double(cx - w / 2.0);
      out += ',';
      out += detail::format_double(cy - h / 2.0);
      out += ',';
      out += detail::format_double(w);
      out += ',';
      out += detail::format_double(h);
      out += ",1,";
      out += std::to_string(category_codes().at(agent.category));
      out += ",0,0\n";
    }
  }
  return out;
}

std::optional<double> analytic_ttc(const AgentSpec & a, const AgentSpec & b, double t, double fps)
{
  const Vec2 rel_pos = agent_position(b, t, fps) - agent_position(a, t, fps);
  const Vec2 rel_vel = b.velocity - a.velocity;
  const double distance = rel_pos.norm();
  if (distance == 0.0) {
    return rel_vel.norm() > 0.0 ? std::optional<double>(0.0) : std::nullopt;
  }
  // Rate at which the gap shrinks; positive when closing.
  const double closing = -rel_pos.dot(rel_vel) / distance;
  if (closing <= 0.0) {
    return std::nullopt;
  }
  return distance / closing;
}

std::optional<double> brute_force_ttc(
  const AgentSpec & a, const AgentSpec & b, double t, double fps, double dt, double horizon)
{
  if (!(dt > 0.0)) {
    throw std::invalid_argument("step size must be positive");
  }

  const std::int64_t steps = static_cast<std::int64_t>(horizon / dt);
  for (std::int64_t k = 0; k <= steps; ++k) {
    const double tau = static_cast<double>(k) * dt;
    const double now = t + tau;
    const Vec2 rel_pos = agent_position(b, now, fps) - agent_position(a, now, fps);
    const double distance = rel_pos.norm();
    if (distance == 0.0) {
      return tau;
    }
    const double closing = -rel_pos.dot(b.velocity - a.velocity) / distance;
    if (closing > 0.0 && distance <= closing * dt) {
      return tau;  // centers coincide within the next step
    }
  }
  return std::nullopt;
}

namespace
{

using json = nlohmann::ordered_json;

}  // namespace

ScenarioSpec parse_scenario(const std::string & json_text)
{
  json j;
  try {
    j = json::parse(json_text);
  } catch (const nlohmann::json::parse_error & e) {
    throw ParseError(std::string("scenario JSON: ") + e.what());
  }

  ScenarioSpec spec;
  try {
    spec.fps = j.value("fps", 30.0);
    spec.scale = j.value("scale", 0.05);
    spec.noise_px = j.value("noise_px", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    for (const auto & aj : j.at("agents")) {
      AgentSpec agent;
      agent.id = aj.at("id").get<std::int64_t>();
      agent.category = aj.value("category", std::string("car"));
      agent.start_position = {aj.at("start").at(0).get<double>(),
                              aj.at("start").at(1).get<double>()};
      agent.velocity = {aj.at("velocity").at(0).get<double>(),
                        aj.at("velocity").at(1).get<double>()};
      agent.start_frame = aj.value("start_frame", std::int64_t{1});
      agent.end_frame = aj.at("end_frame").get<std::int64_t>();
      spec.agents.push_back(std::move(agent));
    }
  } catch (const nlohmann::json::exception & e) {
    throw ParseError(std::string("scenario JSON: ") + e.what());
  }
  check_spec(spec);
  return spec;
}

std::string serialize_scenario(const ScenarioSpec & spec)
{
  json j;
  j["schema_version"] = 1;
  j["fps"] = spec.fps;
  j["scale"] = spec.scale;
  j["noise_px"] = spec.noise_px;
  j["seed"] = spec.seed;
  json agents = json::array();
  for (const auto & agent : spec.agents) {
    json aj;
    aj["id"] = agent.id;
    aj["category"] = agent.category;
    aj["start"] = {agent.start_position.x, agent.start_position.y};
    aj["velocity"] = {agent.velocity.x, agent.velocity.y};
    aj["start_frame"] = agent.start_frame;
    aj["end_frame"] = agent.end_frame;
    agents.push_back(std::move(aj));
  }
  j["agents"] = std::move(agents);
  return j.dump(2) + "\n";
}

}  // namespace uavrisk
