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

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "egocollect/geometry.hpp"
#include "egocollect/kinematics.hpp"

namespace egocollect::qc {

using geometry::CameraIntrinsics;
using geometry::PixelPoint;
using kinematics::HandTrack;
using metrics::Trajectory;

using PixelFrame = std::array<PixelPoint, metrics::kNumJoints>;

struct QCThresholds {
  double sigma_k = 3.0;
  double reproj_px = 5.0;
  double inspect_rate = 0.05;

  void validate() const;
};

struct ReprojectionResult {
  std::vector<double> per_frame_mean_px;  // NaN for frames with no visible joint
  double clip_mean_px = 0.0;
  double max_frame_mean_px = 0.0;
  std::size_t behind_camera_joints = 0;
  std::size_t evaluated_frames = 0;
};

/// Maps world joints into each associated camera, projects them and compares
/// against `observed` (indexed like world_joints.frames). Joints behind the
/// camera are excluded and counted. Throws NoOverlap, AllBehindCamera.
ReprojectionResult reprojection_error(const HandTrack& world_joints, const Trajectory& camera_traj,
                                      const CameraIntrinsics& intr,
                                      const std::vector<PixelFrame>& observed);

struct AnnotatedClip {
  std::string clip_id;
  HandTrack world_track;
  Trajectory camera_traj;
  CameraIntrinsics intrinsics;
  std::vector<PixelFrame> observed;
};

enum class Outcome { kPass, kFail, kInspectSampled };
enum class ReasonKind { kVelocityOutlier, kReprojection, kMalformed };

struct Reason {
  ReasonKind kind = ReasonKind::kMalformed;
  std::vector<std::size_t> frames;  // kVelocityOutlier
  double mean_px = 0.0;             // kReprojection
  std::string message;              // kMalformed
};

struct VerdictStats {
  std::size_t flagged_frames = 0;
  double mean_reproj_px = 0.0;
  double max_reproj_px = 0.0;
  double velocity_mean = 0.0;
  double velocity_sigma = 0.0;
};

struct QCVerdict {
  std::string clip_id;
  Outcome outcome = Outcome::kPass;
  std::vector<Reason> reasons;
  VerdictStats stats;

  bool has_reason(ReasonKind kind) const;
};

/// Velocity (mean + sigma_k * sigma over the clip) and clip-mean reprojection
/// filters. A PASS may be upgraded to INSPECT_SAMPLED by sample_for_inspection.
QCVerdict check_clip(const AnnotatedClip& clip, const QCThresholds& thresholds = {});

/// FNV-1a 64 of the id followed by the splitmix64 finalizer.
std::uint64_t stable_hash(std::string_view id);

/// Deterministic: hash(clip_id) mapped to [0, 1) is compared against rate.
bool sample_for_inspection(std::string_view clip_id, double rate);

enum class Category { kKinematic, kReprojection, kBoth, kMalformed };

struct HardNegativeEntry {
  std::string clip_id;
  std::vector<Reason> reasons;
  Category category = Category::kMalformed;
  double enqueued_at = 0.0;
};

Category categorize(const std::vector<Reason>& reasons);

/// Failed clips awaiting re-annotation. Re-routing a clip id replaces its
/// earlier entry in place. Single writer.
class HardNegativePool {
 public:
  /// Throws NotAFailure unless verdict.outcome is FAIL.
  const HardNegativeEntry& route_failed(const QCVerdict& verdict, double enqueued_at = 0.0);

  /// Removes and returns every entry matching the category. kKinematic and
  /// kReprojection also take kBoth entries.
  std::vector<HardNegativeEntry> drain(Category category);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<HardNegativeEntry>& entries() const { return entries_; }
  bool contains(const std::string& clip_id) const { return index_.count(clip_id) > 0; }

 private:
  void reindex();

  std::vector<HardNegativeEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

const HardNegativeEntry& route_failed(const QCVerdict& verdict, HardNegativePool& pool,
                                      double enqueued_at = 0.0);

std::string_view to_string(Outcome outcome);
std::string_view to_string(ReasonKind kind);
std::string_view to_string(Category category);

}  // namespace egocollect::qc
