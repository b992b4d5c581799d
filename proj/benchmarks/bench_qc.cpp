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

#include <string>

#include "egocollect/qc.hpp"
#include "egocollect/synth.hpp"

using namespace egocollect;

static void BM_CheckClip(benchmark::State& state) {
  synth::CorpusRecipe r;
  r.n_clips = 8;
  const auto corpus = synth::gen_qc_corpus(r);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(qc::check_clip(corpus[i++ % corpus.size()].clip));
}
BENCHMARK(BM_CheckClip);

static void BM_InspectionHash(benchmark::State& state) {
  const std::string id = "device-0042-rec00017";
  for (auto _ : state) benchmark::DoNotOptimize(qc::sample_for_inspection(id, 0.05));
}
BENCHMARK(BM_InspectionHash);
