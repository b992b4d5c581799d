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

#include <random>
#include <vector>

#include "egocollect/geometry.hpp"
#include "egocollect/metrics.hpp"
#include "egocollect/synth.hpp"

using namespace egocollect;

static void BM_Umeyama(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<geometry::Vec3> src(n), dst(n);
  for (std::size_t i = 0; i < n; ++i) {
    src[i] = geometry::Vec3(g(rng), g(rng), g(rng));
    dst[i] = 1.3 * src[i] + geometry::Vec3(0.1, -0.2, 0.3);
  }
  for (auto _ : state) benchmark::DoNotOptimize(geometry::umeyama_align(src, dst, true));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Umeyama)->Arg(21)->Arg(1000)->Arg(100000);

static void BM_EvaluateTrajectory(benchmark::State& state) {
  const auto gt = synth::gen_trajectory(1, static_cast<double>(state.range(0)) / 30.0, 30.0);
  synth::NoiseModel m;
  m.pos_sigma_m = 0.01;
  const auto est = synth::perturb_trajectory(gt, m, 2).data;
  for (auto _ : state) benchmark::DoNotOptimize(metrics::evaluate_trajectory(est, gt));
}
BENCHMARK(BM_EvaluateTrajectory)->Arg(1000)->Arg(10000);
