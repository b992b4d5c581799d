// Copyright 2026 The egocollect Authors
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

#include <benchmark/benchmark.h>

#include "egocollect/fleetsim.hpp"
#include "egocollect/synth.hpp"

using namespace egocollect;

static void BM_FleetHour(benchmark::State& state) {
  const auto sc = synth::gen_fleet_topology({21, "", 4, static_cast<int>(state.range(0)), 800.0, 3600.0, 10.0});
  for (auto _ : state) benchmark::DoNotOptimize(fleet::run(sc, 3600.0));
}
BENCHMARK(BM_FleetHour)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_ReferenceLatencyScenario(benchmark::State& state) {
  synth::ScenarioRecipe r;
  r.named = synth::kPaperLatencyScenario;
  const auto sc = synth::gen_fleet_topology(r);
  for (auto _ : state) benchmark::DoNotOptimize(fleet::run(sc, 600.0));
}
BENCHMARK(BM_ReferenceLatencyScenario)->Unit(benchmark::kMillisecond);
