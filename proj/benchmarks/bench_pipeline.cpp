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

#include <vector>

#include "egocollect/builtin_ops.hpp"
#include "egocollect/pipeline.hpp"
#include "egocollect/synth.hpp"

using namespace egocollect;

static void BM_DefaultPipeline(benchmark::State& state) {
  pipeline::OperatorRegistry reg;
  pipeline::register_builtin_operators(reg);
  synth::CorpusRecipe r;
  r.n_clips = static_cast<std::size_t>(state.range(0));
  std::vector<pipeline::ClipArtifact> inputs;
  for (auto& c : synth::gen_qc_corpus(r)) inputs.push_back(pipeline::make_clip_artifact(std::move(c.clip)));
  const auto spec = pipeline::default_pipeline_spec();
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::run(reg, spec, inputs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DefaultPipeline)->Arg(100)->Unit(benchmark::kMillisecond);
