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

#pragma once

#include <cstdint>
#include <string>

#include "egocollect/pipeline.hpp"
#include "egocollect/synth.hpp"

namespace egocollect::pipeline {

inline constexpr const char* kClipKind = "clip";
inline constexpr const char* kBuiltinVersion = "1.0.0";

struct BuiltinOptions {
  qc::QCThresholds qc;
  // Estimation error injected by traj_stub / hand_stub. Zero keeps the
  // payload untouched, so a QC-only comparison sees the input annotations.
  synth::NoiseModel traj_noise;
  synth::NoiseModel hand_noise;
};

/// Registers segment_stub, deidentify_stub, traj_stub, hand_stub, qc_op and
/// augment_stub at version 1.0.0. Every one consumes and emits kind "clip"
/// with a qc::AnnotatedClip payload.
void register_builtin_operators(OperatorRegistry& registry, const BuiltinOptions& options = {});

/// Wraps an annotated clip as a pipeline input. `markers` is a comma
/// separated list of frame indices where segment_stub cuts the clip.
ClipArtifact make_clip_artifact(qc::AnnotatedClip clip, const std::string& markers = "");

/// segment_stub -> deidentify_stub -> traj_stub -> hand_stub -> qc_op -> augment_stub.
PipelineSpec default_pipeline_spec();

}  // namespace egocollect::pipeline
