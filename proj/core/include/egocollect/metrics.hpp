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
#include <optional>
#include <span>
#include <vector>

#include "egocollect/geometry.hpp"

namespace egocollect::metrics {

using geometry::PoseSE3;
using geometry::Vec3;

inline constexpr std::size_t kNumJoints = 21;
using Joints = std::array<Vec3, kNumJoints>;

struct TimedPose {
  double t = 0.0;
  PoseSE3 pose;
};

// Camera trajectory; timestamps must be strictly increasing.
struct Trajectory {
  std::vector<TimedPose> samples;

  std::size_t size() const { return samples.size(); }
  std::vector<double> timestamps() const;
  /// Throws InvalidArgument on non-increasing or non-finite timestamps.
  void validate() const;
};

struct JointFrame {
  double t = 0.0;
  Joints joints;
};

struct IndexPair {
  std::size_t est = 0;
  std::size_t gt = 0;
};

/// Greedy nearest-timestamp matching. Candidates with |dt| <= max_dt are
/// accepted in order of increasing |dt| (ties: lower est index, then lower
/// gt index); each sample is used at most once. Result is sorted by est index.
/// Throws NoOverlap when nothing matches.
std::vector<IndexPair> associate_timestamps(std::span<const double> est,
                                            std::span<const double> gt, double max_dt);
std::vector<IndexPair> associate(const Trajectory& est, const Trajectory& gt, double max_dt);

/// Half the median sampling interval of the trajectory.
double default_max_dt(const Trajectory& traj);

enum class Alignment { kSim3, kSE3 };

/// RMS position error after aligning est onto gt. kSim3 is the 7-DoF ATE,
/// kSE3 (scale fixed to 1) is ATE-S.
double ate(const Trajectory& est, const Trajectory& gt, Alignment alignment,
           std::optional<double> max_dt = std::nullopt);
double ate_positions(std::span<const Vec3> est, std::span<const Vec3> gt, Alignment alignment);

struct RpeResult {
  double trans_rmse_m = 0.0;
  double rot_rmse_deg = 0.0;
  std::size_t n = 0;
};

/// Relative pose error over associated-pair steps of delta_frames. No global
/// alignment. Throws InsufficientPairs.
RpeResult rpe(const Trajectory& est, const Trajectory& gt, int delta_frames = 1,
              std::optional<double> max_dt = std::nullopt);

struct TrajectoryReport {
  double ate_rmse_m = 0.0;
  double ate_s_rmse_m = 0.0;
  double rpe_trans_rmse_m = 0.0;
  double rpe_rot_rmse_deg = 0.0;
  std::size_t n_pairs = 0;
};

TrajectoryReport evaluate_trajectory(const Trajectory& est, const Trajectory& gt,
                                     int rpe_delta = 1, std::optional<double> max_dt = std::nullopt);

/// Mean joint distance in millimetres, no alignment. Throws LengthMismatch.
double mpjpe(std::span<const JointFrame> pred, std::span<const JointFrame> gt);

struct PaMpjpeResult {
  double mm = 0.0;
  std::size_t skipped_frames = 0;
};

/// Per-frame Sim(3)-aligned MPJPE. Frames whose alignment is degenerate are
/// skipped and counted.
PaMpjpeResult pa_mpjpe(std::span<const JointFrame> pred, std::span<const JointFrame> gt);

struct PckPoint {
  double threshold_mm = 0.0;
  double fraction = 0.0;
};

struct PckResult {
  std::vector<PckPoint> curve;  // n_steps thresholds max*k/n, k = 1..n
  double auc = 0.0;
};

// The AUC integrates from threshold 0 (the curve is anchored at PCK(0))
// to max_threshold_mm with the trapezoid rule, normalized to [0, 1].
PckResult pck_auc(std::span<const JointFrame> pred, std::span<const JointFrame> gt,
                  double max_threshold_mm = 50.0, int n_steps = 100);

struct PoseReport {
  double mpjpe_mm = 0.0;
  double pa_mpjpe_mm = 0.0;
  double auc = 0.0;
  std::size_t n_frames = 0;
};

PoseReport evaluate_pose(std::span<const JointFrame> pred, std::span<const JointFrame> gt,
                         double auc_max_mm = 50.0, int auc_steps = 100);

}  // namespace egocollect::metrics
