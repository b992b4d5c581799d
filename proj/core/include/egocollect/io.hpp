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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "egocollect/device.hpp"
#include "egocollect/fleetsim.hpp"
#include "egocollect/kinematics.hpp"
#include "egocollect/metrics.hpp"
#include "egocollect/pipeline.hpp"
#include "egocollect/qc.hpp"
#include "egocollect/synth.hpp"

// Text formats. Every reader throws Error(kParse) whose message starts with
// "<source>:<line>:" when a line number is meaningful.
namespace egocollect::io {

namespace fs = std::filesystem;

// TUM trajectory: "timestamp tx ty tz qx qy qz qw" per line, '#' comments.
metrics::Trajectory read_tum(std::istream& in, const std::string& source = "<stream>");
metrics::Trajectory read_tum_file(const fs::path& path);
void write_tum(std::ostream& out, const metrics::Trajectory& traj);
void write_tum_file(const fs::path& path, const metrics::Trajectory& traj);

// Joint sequences: {"t": s, "joints": [[x,y,z] x 21]} per line.
std::vector<metrics::JointFrame> read_joints_jsonl(std::istream& in, const std::string& source = "<stream>");
std::vector<metrics::JointFrame> read_joints_file(const fs::path& path);
void write_joints_jsonl(std::ostream& out, const std::vector<metrics::JointFrame>& frames);
void write_joints_file(const fs::path& path, const std::vector<metrics::JointFrame>& frames);

// Observed pixels: {"t": s, "pixels": [[u,v] x 21]} per line.
std::vector<qc::PixelFrame> read_pixels_jsonl(std::istream& in, const std::string& source = "<stream>");
void write_pixels_jsonl(std::ostream& out, const std::vector<qc::PixelFrame>& pixels,
                        const std::vector<double>& timestamps);

geometry::CameraIntrinsics parse_intrinsics(const std::string& text, const std::string& source = "<string>");
std::string intrinsics_json(const geometry::CameraIntrinsics& intr);

// Reports. Field names match the C++ structs.
std::string report_json(const metrics::TrajectoryReport& r, bool pretty = false);
std::string report_json(const metrics::PoseReport& r, bool pretty = false);
std::string verdict_json(const qc::QCVerdict& v);  // single line
std::string pool_json(const qc::HardNegativePool& pool, bool pretty = false);
std::string report_json(const pipeline::RunReport& r, bool pretty = false);
std::string report_json(const fleet::SimReport& r, bool pretty = false);
std::string stats_json(const device::DashboardStats& s, bool pretty = false);
/// Snapshots as CSV: t_s,uploads_sent,upload_in_flight,ingested,replicated,in_transit,node_resident.
std::string snapshots_csv(const fleet::SimReport& r);

pipeline::PipelineSpec parse_pipeline_spec(const std::string& text, const std::string& source = "<string>");
std::string pipeline_spec_json(const pipeline::PipelineSpec& spec, bool pretty = true);

/// Devices may be an explicit list or {"count": n, "radius_km": r}, placed
/// round-robin around the regions with the scenario seed.
fleet::FleetScenario parse_scenario(const std::string& text, const std::string& source = "<string>");
std::string scenario_json(const fleet::FleetScenario& sc, bool pretty = true);

device::DeviceConfig parse_device_config(const std::string& text, const std::string& source = "<string>");
std::string device_config_json(const device::DeviceConfig& c, bool pretty = true);
std::vector<device::DetectorEvent> read_events_jsonl(std::istream& in, const std::string& source = "<stream>");
void write_events_jsonl(std::ostream& out, const std::vector<device::DetectorEvent>& events);

std::string read_text_file(const fs::path& path);
void write_text_file(const fs::path& path, const std::string& text);

// Corpus directory: <dir>/<clip_id>/{trajectory.tum, hand_world.jsonl,
// observed.jsonl, intrinsics.json} plus <dir>/manifest.json.
struct CorpusEntry {
  qc::AnnotatedClip clip;
  std::string markers;                // segment_stub cut points, may be empty
  std::vector<synth::SpikeRecord> spikes;  // generator log, informational
  double pixel_offset_px = 0.0;
};

void write_corpus(const fs::path& dir, const std::vector<synth::CorpusClip>& corpus,
                  const synth::CorpusRecipe& recipe);
/// Throws Parse on layout violations (missing files, unknown clips).
std::vector<CorpusEntry> read_corpus(const fs::path& dir);

}  // namespace egocollect::io
