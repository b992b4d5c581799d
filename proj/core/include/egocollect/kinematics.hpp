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
#include <vector>

#include "egocollect/metrics.hpp"

namespace egocollect::kinematics {

using metrics::JointFrame;
using metrics::kNumJoints;
using metrics::Trajectory;

enum class FrameOfReference { kCamera, kWorld };

struct HandTrack {
  double frame_rate = 30.0;
  std::vector<JointFrame> frames;
  FrameOfReference frame_of_reference = FrameOfReference::kCamera;

  std::size_t size() const { return frames.size(); }
  /// Checks frame_rate > 0, increasing timestamps, and per-step spacing within
  /// 10% of 1/frame_rate.
  void validate() const;
};

/// Track frames matched to camera poses with max_dt = half the frame period.
std::vector<metrics::IndexPair> associate_track(const HandTrack& track, const Trajectory& camera_traj);

struct ToWorldResult {
  HandTrack track;
  std::size_t dropped_frames = 0;
};

/// Maps camera-frame joints into the world frame using the associated
/// world-from-camera pose. Unmatched frames are dropped. Throws NoOverlap.
ToWorldResult to_world(const HandTrack& track, const Trajectory& camera_traj);

struct VelocityProfile {
  // speeds[frame][joint], m/s
  std::vector<std::array<double, kNumJoints>> speeds;
};

/// Central differences on interior frames, one-sided at the ends, divided by
/// actual timestamp deltas. Throws TooShort below 3 frames.
VelocityProfile joint_velocities(const HandTrack& track);

struct OutlierFlags {
  std::vector<bool> flags;
  double sigma_used = 0.0;
  double mean_used = 0.0;
  // Set when sigma is exactly zero; frames deviating from the mean are flagged.
  bool degenerate_sigma = false;

  std::vector<std::size_t> flagged_frames() const;
};

/// Flags a frame when any joint speed exceeds mean + k * sigma, where mean and
/// population sigma are taken over every (frame, joint) speed of the clip.
OutlierFlags detect_outliers(const VelocityProfile& profile, double k = 3.0);

inline constexpr int kDefaultSmoothWindow = 11;
inline constexpr double kDefaultSmoothLambda = 10.0;

/// Sliding-window smoother. Each window solves, per joint and axis,
///   min sum (x_i - obs_i)^2 + lambda_acc * sum (x_{i-1} - 2 x_i + x_{i+1})^2
/// and writes back its center sample; the first and last window/2 frames take
/// the first and last window's solution. Throws BadWindow, WindowTooLarge.
HandTrack sliding_window_smooth(const HandTrack& track, int window = kDefaultSmoothWindow,
                                double lambda_acc = kDefaultSmoothLambda);

/// Sum over frames, joints and axes of the squared second difference.
double total_squared_acceleration(const HandTrack& track);

}  // namespace egocollect::kinematics
