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
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "egocollect/fleetsim.hpp"
#include "egocollect/geometry.hpp"
#include "egocollect/kinematics.hpp"
#include "egocollect/qc.hpp"

namespace egocollect::synth {

using geometry::CameraIntrinsics;
using geometry::Vec3;
using kinematics::HandTrack;
using metrics::Trajectory;

// Clamped cubic spline through seeded control points, one knot per
// knot_spacing_s. Position and yaw/pitch/roll are splined independently.
class TrajectorySpline {
 public:
  struct Options {
    double knot_spacing_s = 1.0;
    double position_amplitude_m = 0.5;
    double angle_amplitude_rad = 0.3;
  };

  TrajectorySpline(std::uint64_t seed, double duration_s, Options options);
  TrajectorySpline(std::uint64_t seed, double duration_s) : TrajectorySpline(seed, duration_s, Options{}) {}

  Vec3 position(double t) const;
  Vec3 acceleration(double t) const;
  geometry::UnitQuaternion orientation(double t) const;

  /// Second derivatives are piecewise linear, so |acceleration| is maximal at
  /// a knot; this returns that maximum.
  double acceleration_bound() const;

 private:
  struct Axis {
    std::vector<double> y;
    std::vector<double> m;  // second derivatives at knots
  };
  static Axis fit(std::vector<double> y, double h);
  double eval(const Axis& a, double t) const;
  double eval_acc(const Axis& a, double t) const;

  double h_;
  std::vector<Axis> axes_;  // x, y, z, yaw, pitch, roll
};

/// Ground-truth camera trajectory sampled at t = i / fps, i < round(duration * fps).
Trajectory gen_trajectory(std::uint64_t seed, double duration_s, double fps,
                          TrajectorySpline::Options options = {});

/// Rigid 21-joint hand template inside a 20 cm box, wrist at the origin.
const metrics::Joints& hand_template();

/// Default phone intrinsics used by the generators.
CameraIntrinsics default_intrinsics();

struct GeneratedHand {
  HandTrack world;
  HandTrack camera;
  std::vector<qc::PixelFrame> pixels;
  std::size_t resampled = 0;  // attempts rejected for joints behind the camera
};

/// Animates the hand template smoothly in front of the camera. The camera
/// track is built first; world = pose * camera joints, pixels = project(camera joints).
GeneratedHand gen_hand_track(const Trajectory& traj, std::uint64_t seed,
                             const CameraIntrinsics& intr = default_intrinsics());

struct Spike {
  std::size_t frame = 0;
  double magnitude = 10.0;  // in units of the clean clip's speed sigma
};

struct NoiseModel {
  double pos_sigma_m = 0.0;
  double rot_sigma_deg = 0.0;
  double pixel_sigma_px = 0.0;
  Eigen::Vector2d pixel_offset_px = Eigen::Vector2d::Zero();  // systematic shift
  std::vector<Spike> spikes;
};

struct SpikeRecord {
  std::size_t frame = 0;
  double magnitude = 0.0;
  double sigma_base = 0.0;  // clean speed sigma, m/s
  Vec3 displacement = Vec3::Zero();
  // Frames whose velocity stencil contains the displaced frame.
  std::vector<std::size_t> velocity_frames;
};

struct PerturbationLog {
  std::vector<SpikeRecord> spikes;
  std::vector<metrics::Joints> joint_offsets;                      // track perturbation
  std::vector<geometry::PoseSE3> pose_offsets;                     // left-applied to each pose
  std::vector<std::array<Eigen::Vector2d, metrics::kNumJoints>> pixel_offsets;
};

template <typename T>
struct Perturbed {
  T data;
  PerturbationLog log;
};

/// Gaussian joint noise (pos_sigma_m) followed by spikes. A spike at frame k
/// translates the whole hand by mean + magnitude*sigma + max_speed (m/s)
/// times the widest affected stencil, which guarantees every affected
/// frame's speed exceeds mean + magnitude*sigma of the clean profile.
Perturbed<HandTrack> perturb_track(const HandTrack& track, const NoiseModel& model, std::uint64_t seed);
Perturbed<Trajectory> perturb_trajectory(const Trajectory& traj, const NoiseModel& model, std::uint64_t seed);
Perturbed<std::vector<qc::PixelFrame>> perturb_pixels(const std::vector<qc::PixelFrame>& pixels,
                                                      const NoiseModel& model, std::uint64_t seed);

/// Frames j (of n) whose central/one-sided difference stencil includes frame
/// k, excluding k itself when it is interior.
std::vector<std::size_t> velocity_footprint(std::size_t k, std::size_t n);

struct CorpusRecipe {
  std::uint64_t seed = 7;
  std::size_t n_clips = 100;
  double duration_s = 3.0;
  double fps = 30.0;
  double spike_fraction = 0.3;
  double spike_magnitude = 10.0;
  double reproj_fraction = 0.2;
  double reproj_offset_px = 6.0;
  double pixel_sigma_px = 0.5;
};

struct CorpusClip {
  qc::AnnotatedClip clip;
  std::vector<SpikeRecord> spikes;
  double pixel_offset_px = 0.0;
};

/// QC test corpus: smooth clips, a seeded subset with one velocity spike and
/// a seeded subset with a uniform pixel offset along u.
std::vector<CorpusClip> gen_qc_corpus(const CorpusRecipe& recipe);

struct ScenarioRecipe {
  std::uint64_t seed = 1;
  std::string named;  // "paper-latency" selects the reference topology
  int n_regions = 3;
  int n_devices = 30;
  double device_radius_km = 500.0;
  double duration_s = 600.0;
  double rate_per_s = 1.0;
};

inline constexpr const char* kPaperLatencyScenario = "paper-latency";

/// Places n devices round-robin over the regions, uniformly within radius_km.
void place_devices(fleet::FleetScenario& scenario, int n_devices, double radius_km, std::uint64_t seed);

/// Seeded fleet scenario; recipe.named == "paper-latency" returns the
/// reference 3-region topology regardless of the other fields except seed.
fleet::FleetScenario gen_fleet_topology(const ScenarioRecipe& recipe);

}  // namespace egocollect::synth
