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

#include "egocollect/kinematics.hpp"
#include "egocollect/synth.hpp"

using namespace egocollect;

static void BM_SlidingWindowSmooth(benchmark::State& state) {
  const auto traj = synth::gen_trajectory(3, static_cast<double>(state.range(0)) / 30.0, 30.0);
  synth::NoiseModel m;
  m.pos_sigma_m = 0.005;
  const auto track = synth::perturb_track(synth::gen_hand_track(traj, 4).world, m, 5).data;
  for (auto _ : state) benchmark::DoNotOptimize(kinematics::sliding_window_smooth(track));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SlidingWindowSmooth)->Arg(300)->Arg(3000);
