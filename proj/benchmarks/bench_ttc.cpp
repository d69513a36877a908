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

#include <random>

#include <benchmark/benchmark.h>

#include "../tests/support/oracles.hpp"
#include "uavrisk/synthetic.hpp"
#include "uavrisk/trajectory_io.hpp"
#include "uavrisk/ttc.hpp"

namespace
{

using namespace uavrisk;

std::vector<AgentState> frame_of(int n)
{
  std::mt19937_64 rng(12345);
  return uavrisk::testing::random_frame(rng, n, 2000.0, 12.0);
}

void BM_AssessFrameGrid(benchmark::State & state)
{
  const auto states = frame_of(static_cast<int>(state.range(0)));
  const AssessParams params{30.0, 2.5, TtcMode::projected};
  for (auto _ : state) {
    benchmark::DoNotOptimize(assess_frame(states, params));
  }
}
BENCHMARK(BM_AssessFrameGrid)->Arg(200)->Arg(1000)->Arg(4000);

void BM_AssessFrameAllPairs(benchmark::State & state)
{
  const auto states = frame_of(static_cast<int>(state.range(0)));
  const AssessParams params{30.0, 2.5, TtcMode::projected};
  for (auto _ : state) {
    benchmark::DoNotOptimize(uavrisk::testing::assess_frame_all_pairs(states, params));
  }
}
BENCHMARK(BM_AssessFrameAllPairs)->Arg(200)->Arg(1000)->Arg(4000);

void BM_ParseAnnotations(benchmark::State & state)
{
  ScenarioSpec spec;
  spec.fps = 30.0;
  spec.scale = 0.05;
  for (int i = 0; i < 50; ++i) {
    AgentSpec a;
    a.id = i;
    a.start_position = {static_cast<double>(i * 7 % 100), static_cast<double>(i * 13 % 100)};
    a.velocity = {1.0 + 0.1 * i, -0.5};
    a.start_frame = 1;
    a.end_frame = 200;
    spec.agents.push_back(a);
  }
  const auto text = generate_scenario(spec);
  const auto map = CategoryMap::visdrone_defaults();
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_annotations(text, map));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseAnnotations);

}  // namespace

BENCHMARK_MAIN();
