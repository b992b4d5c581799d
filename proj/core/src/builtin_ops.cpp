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

#include "egocollect/builtin_ops.hpp"

#include <charconv>
#include <set>

#include "egocollect/error.hpp"

namespace egocollect::pipeline {

namespace {

const qc::AnnotatedClip& clip_of(const ClipArtifact& a) {
  const auto* c = std::any_cast<qc::AnnotatedClip>(&a.payload);
  if (!c) throw Error(ErrorCode::kInvalidArgument, "payload of " + a.clip_id + " is not an annotated clip");
  return *c;
}

std::vector<std::size_t> parse_markers(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::size_t v = 0;
    const auto* b = text.data() + pos;
    const auto* e = text.data() + comma;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) throw Error(ErrorCode::kParse, "bad segment marker list '" + text + "'");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

// Frames [lo, hi) of the clip; the camera trajectory is cut to the same time span.
qc::AnnotatedClip slice(const qc::AnnotatedClip& c, std::size_t lo, std::size_t hi, const std::string& id) {
  qc::AnnotatedClip out;
  out.clip_id = id;
  out.intrinsics = c.intrinsics;
  out.world_track.frame_rate = c.world_track.frame_rate;
  out.world_track.frame_of_reference = c.world_track.frame_of_reference;
  out.world_track.frames.assign(c.world_track.frames.begin() + static_cast<std::ptrdiff_t>(lo),
                                c.world_track.frames.begin() + static_cast<std::ptrdiff_t>(hi));
  out.observed.assign(c.observed.begin() + static_cast<std::ptrdiff_t>(lo),
                      c.observed.begin() + static_cast<std::ptrdiff_t>(hi));
  const double t0 = out.world_track.frames.front().t;
  const double t1 = out.world_track.frames.back().t;
  const double slack = 0.5 / c.world_track.frame_rate;
  for (const auto& s : c.camera_traj.samples) {
    if (s.t >= t0 - slack && s.t <= t1 + slack) out.camera_traj.samples.push_back(s);
  }
  return out;
}

OpResult segment(const ClipArtifact& in, const OpContext&) {
  const auto& clip = clip_of(in);
  const std::size_t n = clip.world_track.frames.size();
  std::set<std::size_t> cuts;
  if (auto it = in.tags.find("markers"); it != in.tags.end()) {
    for (std::size_t m : parse_markers(it->second)) {
      if (m > 0 && m < n) cuts.insert(m);
    }
  }
  if (cuts.empty()) return OpResult::emit(in);
  OpResult r;
  std::size_t lo = 0, k = 0;
  cuts.insert(n);
  for (std::size_t hi : cuts) {
    ClipArtifact seg = in;
    seg.clip_id = in.clip_id + "/seg" + std::to_string(k++);
    seg.tags.erase("markers");
    seg.tags["segment_of"] = in.clip_id;
    seg.payload = slice(clip, lo, hi, seg.clip_id);
    r.outputs.push_back(std::move(seg));
    lo = hi;
  }
  return r;
}

OpResult tag(const ClipArtifact& in, const char* key) {
  ClipArtifact out = in;
  out.tags[key] = "1";
  return OpResult::emit(std::move(out));
}

bool is_zero(const synth::NoiseModel& m) {
  return m.pos_sigma_m == 0.0 && m.rot_sigma_deg == 0.0 && m.pixel_sigma_px == 0.0 &&
         m.pixel_offset_px.isZero() && m.spikes.empty();
}

}  // namespace

ClipArtifact make_clip_artifact(qc::AnnotatedClip clip, const std::string& markers) {
  ClipArtifact a;
  a.clip_id = clip.clip_id;
  a.root_id = clip.clip_id;
  a.kind = kClipKind;
  if (!markers.empty()) a.tags["markers"] = markers;
  a.payload = std::move(clip);
  return a;
}

void register_builtin_operators(OperatorRegistry& registry, const BuiltinOptions& options) {
  auto spec = [](const char* name, ResourceClass rc, double mean_s) {
    return OperatorSpec{name, kBuiltinVersion, rc, kClipKind, kClipKind, mean_s, 0.2};
  };
  registry.register_operator(spec("segment_stub", ResourceClass::kGpu, 0.8), segment);
  registry.register_operator(spec("deidentify_stub", ResourceClass::kCpu, 0.3),
                             [](const ClipArtifact& in, const OpContext&) { return tag(in, "deidentified"); });

  const auto traj_noise = options.traj_noise;
  registry.register_operator(spec("traj_stub", ResourceClass::kGpu, 1.5),
                             [traj_noise](const ClipArtifact& in, const OpContext& ctx) {
                               ClipArtifact out = in;
                               out.tags["trajectory"] = "estimated";
                               if (is_zero(traj_noise)) return OpResult::emit(std::move(out));
                               auto clip = clip_of(in);
                               clip.camera_traj = synth::perturb_trajectory(clip.camera_traj, traj_noise, ctx.seed).data;
                               out.payload = std::move(clip);
                               return OpResult::emit(std::move(out));
                             });
  const auto hand_noise = options.hand_noise;
  registry.register_operator(spec("hand_stub", ResourceClass::kGpu, 1.2),
                             [hand_noise](const ClipArtifact& in, const OpContext& ctx) {
                               ClipArtifact out = in;
                               out.tags["hands"] = "estimated";
                               if (is_zero(hand_noise)) return OpResult::emit(std::move(out));
                               auto clip = clip_of(in);
                               clip.world_track = synth::perturb_track(clip.world_track, hand_noise, ctx.seed).data;
                               out.payload = std::move(clip);
                               return OpResult::emit(std::move(out));
                             });

  const auto thresholds = options.qc;
  registry.register_operator(spec("qc_op", ResourceClass::kCpu, 0.1),
                             [thresholds](const ClipArtifact& in, const OpContext&) {
                               auto clip = clip_of(in);
                               clip.clip_id = in.clip_id;
                               auto verdict = qc::check_clip(clip, thresholds);
                               if (verdict.outcome == qc::Outcome::kFail) return OpResult::reject(std::move(verdict));
                               ClipArtifact out = in;
                               out.tags["qc"] = std::string(qc::to_string(verdict.outcome));
                               return OpResult::emit(std::move(out));
                             });
  registry.register_operator(spec("augment_stub", ResourceClass::kGpu, 1.0),
                             [](const ClipArtifact& in, const OpContext&) { return tag(in, "augmented"); });
}

PipelineSpec default_pipeline_spec() {
  PipelineSpec spec;
  const char* ids[] = {"segment", "deidentify", "trajectory", "hands", "qc", "augment"};
  const char* ops[] = {"segment_stub", "deidentify_stub", "traj_stub", "hand_stub", "qc_op", "augment_stub"};
  for (int i = 0; i < 6; ++i) spec.stages.push_back({ids[i], ops[i], std::nullopt});
  for (int i = 0; i + 1 < 6; ++i) spec.edges.emplace_back(ids[i], ids[i + 1]);
  return spec;
}

}  // namespace egocollect::pipeline
