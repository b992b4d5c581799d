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

#include "egocollect/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "egocollect/error.hpp"

namespace egocollect::synth {

namespace {

using Rng = std::mt19937_64;

// Independent stream per (seed, purpose) so adding draws to one generator
// never shifts another.
Rng stream(std::uint64_t seed, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
  return Rng(seq);
}

enum : std::uint64_t {
  kTagSpline = 0x51,
  kTagHand = 0x52,
  kTagTrackNoise = 0x53,
  kTagPoseNoise = 0x54,
  kTagPixelNoise = 0x55,
  kTagSpikeDir = 0x56,
  kTagCorpus = 0x57,
  kTagFleet = 0x58,
  kTagDevices = 0x59,
};

Vec3 unit_vector(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    Vec3 v(n(rng), n(rng), n(rng));
    const double len = v.norm();
    if (len > 1e-6) return v / len;
  }
}

geometry::UnitQuaternion ypr(double yaw, double pitch, double roll) {
  using geometry::UnitQuaternion;
  return UnitQuaternion::from_axis_angle(Vec3::UnitZ(), yaw) *
         UnitQuaternion::from_axis_angle(Vec3::UnitY(), pitch) *
         UnitQuaternion::from_axis_angle(Vec3::UnitX(), roll);
}

}  // namespace

TrajectorySpline::Axis TrajectorySpline::fit(std::vector<double> y, double h) {
  const std::size_t n = y.size();
  // Clamped ends (zero slope): tridiagonal system in the knot second derivatives.
  std::vector<double> a(n, h / 6.0), b(n, 2.0 * h / 3.0), c(n, h / 6.0), d(n, 0.0);
  b.front() = b.back() = h / 3.0;
  a.front() = 0.0;
  c.back() = 0.0;
  d.front() = (y[1] - y[0]) / h;
  d.back() = -(y[n - 1] - y[n - 2]) / h;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d[i] = (y[i + 1] - y[i]) / h - (y[i] - y[i - 1]) / h;
  }
  // Thomas algorithm.
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  std::vector<double> m(n);
  m[n - 1] = d[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) m[i] = (d[i] - c[i] * m[i + 1]) / b[i];
  return {std::move(y), std::move(m)};
}

TrajectorySpline::TrajectorySpline(std::uint64_t seed, double duration_s, Options options)
    : h_(options.knot_spacing_s) {
  if (!(duration_s > 0.0) || !(h_ > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "duration and knot spacing must be positive");
  }
  const auto segments = static_cast<std::size_t>(std::max(1.0, std::ceil(duration_s / h_ - 1e-12)));
  auto rng = stream(seed, kTagSpline);
  std::uniform_real_distribution<double> pos(-options.position_amplitude_m, options.position_amplitude_m);
  std::uniform_real_distribution<double> ang(-options.angle_amplitude_rad, options.angle_amplitude_rad);
  for (int axis = 0; axis < 6; ++axis) {
    std::vector<double> y(segments + 1);
    for (auto& v : y) v = axis < 3 ? pos(rng) : ang(rng);
    axes_.push_back(fit(std::move(y), h_));
  }
}

double TrajectorySpline::eval(const Axis& ax, double t) const {
  const std::size_t last = ax.y.size() - 2;
  const auto i = std::min(last, static_cast<std::size_t>(std::max(0.0, std::floor(t / h_))));
  const double t0 = static_cast<double>(i) * h_;
  const double l = t - t0;        // distance from left knot
  const double r = t0 + h_ - t;   // distance to right knot
  return ax.m[i] * r * r * r / (6.0 * h_) + ax.m[i + 1] * l * l * l / (6.0 * h_) +
         (ax.y[i] / h_ - ax.m[i] * h_ / 6.0) * r + (ax.y[i + 1] / h_ - ax.m[i + 1] * h_ / 6.0) * l;
}

double TrajectorySpline::eval_acc(const Axis& ax, double t) const {
  const std::size_t last = ax.y.size() - 2;
  const auto i = std::min(last, static_cast<std::size_t>(std::max(0.0, std::floor(t / h_))));
  const double t0 = static_cast<double>(i) * h_;
  return (ax.m[i] * (t0 + h_ - t) + ax.m[i + 1] * (t - t0)) / h_;
}

Vec3 TrajectorySpline::position(double t) const {
  return {eval(axes_[0], t), eval(axes_[1], t), eval(axes_[2], t)};
}

Vec3 TrajectorySpline::acceleration(double t) const {
  return {eval_acc(axes_[0], t), eval_acc(axes_[1], t), eval_acc(axes_[2], t)};
}

geometry::UnitQuaternion TrajectorySpline::orientation(double t) const {
  return ypr(eval(axes_[3], t), eval(axes_[4], t), eval(axes_[5], t));
}

double TrajectorySpline::acceleration_bound() const {
  double best = 0.0;
  for (std::size_t k = 0; k < axes_[0].m.size(); ++k) {
    best = std::max(best, Vec3(axes_[0].m[k], axes_[1].m[k], axes_[2].m[k]).norm());
  }
  return best;
}

Trajectory gen_trajectory(std::uint64_t seed, double duration_s, double fps,
                          TrajectorySpline::Options options) {
  if (!(duration_s > 0.0) || !(fps > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "duration and fps must be positive");
  }
  const TrajectorySpline spline(seed, duration_s, options);
  const auto n = static_cast<std::size_t>(std::llround(duration_s * fps));
  Trajectory traj;
  traj.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fps;
    traj.samples.push_back({t, {spline.orientation(t), spline.position(t)}});
  }
  return traj;
}

const metrics::Joints& hand_template() {
  // Wrist, then four joints per finger from thumb to little finger. Image-up
  // is -y, so fingers extend towards negative y.
  static const metrics::Joints kTemplate = [] {
    metrics::Joints j;
    j[0] = Vec3(0.0, 0.0, 0.0);
    const double base_x[5] = {-0.045, -0.022, 0.0, 0.020, 0.038};
    const double base_y[5] = {-0.025, -0.085, -0.090, -0.085, -0.075};
    const double step[5] = {0.022, 0.026, 0.028, 0.026, 0.020};
    const double splay[5] = {-0.55, -0.12, 0.0, 0.10, 0.22};
    for (int f = 0; f < 5; ++f) {
      for (int k = 0; k < 4; ++k) {
        const double along = step[f] * k;
        j[1 + 4 * f + k] = Vec3(base_x[f] + along * std::sin(splay[f]),
                                base_y[f] - along * std::cos(splay[f]),
                                0.004 * k * (f == 0 ? 2.0 : 1.0));
      }
    }
    return j;
  }();
  return kTemplate;
}

CameraIntrinsics default_intrinsics() {
  CameraIntrinsics intr;
  intr.fx = 1400.0;
  intr.fy = 1400.0;
  intr.cx = 960.0;
  intr.cy = 540.0;
  intr.k1 = -0.05;
  intr.k2 = 0.01;
  intr.k3 = 0.0;
  intr.width = 1920;
  intr.height = 1080;
  return intr;
}

GeneratedHand gen_hand_track(const Trajectory& traj, std::uint64_t seed, const CameraIntrinsics& intr) {
  intr.validate();
  const auto& tmpl = hand_template();
  constexpr double kMinDepth = 0.05;

  double fps = 30.0;
  if (traj.size() >= 2) {
    const double span = traj.samples.back().t - traj.samples.front().t;
    fps = static_cast<double>(traj.size() - 1) / span;
  }

  GeneratedHand out;
  for (std::uint64_t attempt = 0;; ++attempt) {
    auto rng = stream(seed + attempt * 0x9E3779B97F4A7C15ULL, kTagHand);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> freq(0.3, 0.9);  // Hz
    double ph[6], fr[6];
    for (int k = 0; k < 6; ++k) {
      ph[k] = phase(rng);
      fr[k] = 2.0 * std::numbers::pi * freq(rng);
    }
    const Vec3 amp_pos(0.04, 0.03, 0.04);
    const Vec3 amp_rot(0.25, 0.25, 0.35);

    HandTrack camera;
    camera.frame_rate = fps;
    camera.frame_of_reference = kinematics::FrameOfReference::kCamera;
    bool ok = true;
    for (const auto& s : traj.samples) {
      const double t = s.t;
      const Vec3 centre(amp_pos.x() * std::sin(fr[0] * t + ph[0]),
                        0.06 + amp_pos.y() * std::sin(fr[1] * t + ph[1]),
                        0.45 + amp_pos.z() * std::sin(fr[2] * t + ph[2]));
      const auto rot = ypr(amp_rot.z() * std::sin(fr[5] * t + ph[5]),
                           amp_rot.y() * std::sin(fr[4] * t + ph[4]),
                           amp_rot.x() * std::sin(fr[3] * t + ph[3]));
      metrics::JointFrame f{t, {}};
      for (std::size_t j = 0; j < metrics::kNumJoints; ++j) {
        f.joints[j] = centre + rot.rotate(tmpl[j]);
        ok = ok && f.joints[j].z() > kMinDepth;
      }
      camera.frames.push_back(f);
    }
    if (!ok) {
      ++out.resampled;
      continue;
    }

    HandTrack world = camera;
    world.frame_of_reference = kinematics::FrameOfReference::kWorld;
    out.pixels.clear();
    out.pixels.reserve(camera.frames.size());
    for (std::size_t i = 0; i < camera.frames.size(); ++i) {
      qc::PixelFrame px;
      for (std::size_t j = 0; j < metrics::kNumJoints; ++j) {
        world.frames[i].joints[j] = geometry::apply(traj.samples[i].pose, camera.frames[i].joints[j]);
        px[j] = geometry::project(intr, camera.frames[i].joints[j]);
      }
      out.pixels.push_back(px);
    }
    out.world = std::move(world);
    out.camera = std::move(camera);
    return out;
  }
}

std::vector<std::size_t> velocity_footprint(std::size_t k, std::size_t n) {
  std::vector<std::size_t> out;
  if (n < 3 || k >= n) return out;
  if (k >= 1) out.push_back(k - 1);
  if (k == 0 || k == n - 1) out.push_back(k);
  if (k + 1 < n) out.push_back(k + 1);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct SpeedStats {
  double mean = 0.0, sigma = 0.0, max = 0.0;
};

SpeedStats speed_stats(const kinematics::VelocityProfile& profile) {
  SpeedStats s;
  double sum = 0.0, sq = 0.0;
  std::size_t count = 0;
  for (const auto& row : profile.speeds) {
    for (double v : row) {
      sum += v;
      sq += v * v;
      s.max = std::max(s.max, v);
      ++count;
    }
  }
  s.mean = sum / static_cast<double>(count);
  s.sigma = std::sqrt(std::max(0.0, sq / static_cast<double>(count) - s.mean * s.mean));
  return s;
}

// Widest time span of the difference stencils that contain frame k.
double stencil_span(const std::vector<double>& t, std::size_t k) {
  const std::size_t n = t.size();
  double widest = 0.0;
  for (std::size_t j : velocity_footprint(k, n)) {
    const std::size_t lo = j == 0 ? 0 : (j == n - 1 ? n - 2 : j - 1);
    const std::size_t hi = j == 0 ? 1 : (j == n - 1 ? n - 1 : j + 1);
    widest = std::max(widest, t[hi] - t[lo]);
  }
  return widest;
}

// Displacement that pushes every affected stencil's speed above mean +
// magnitude * sigma: the stencil divides D by at most `span`, and the clean
// motion can cancel at most max_speed of it.
double spike_distance(const SpeedStats& s, double magnitude, double span) {
  return (s.mean + magnitude * s.sigma + s.max) * span;
}

void check_spikes(const std::vector<Spike>& spikes, std::size_t n) {
  for (const auto& sp : spikes) {
    if (sp.frame >= n) {
      throw Error(ErrorCode::kInvalidArgument, "spike frame " + std::to_string(sp.frame) + " out of range");
    }
    if (!(sp.magnitude >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "spike magnitude must be >= 0");
  }
}

void check_model(const NoiseModel& m) {
  if (!(m.pos_sigma_m >= 0.0) || !(m.rot_sigma_deg >= 0.0) || !(m.pixel_sigma_px >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise sigmas must be >= 0");
  }
}

}  // namespace

Perturbed<HandTrack> perturb_track(const HandTrack& track, const NoiseModel& model, std::uint64_t seed) {
  check_model(model);
  const std::size_t n = track.frames.size();
  check_spikes(model.spikes, n);
  Perturbed<HandTrack> out{track, {}};
  out.log.joint_offsets.assign(n, metrics::Joints{});
  for (auto& f : out.log.joint_offsets) f.fill(Vec3::Zero());

  if (model.pos_sigma_m > 0.0) {
    auto rng = stream(seed, kTagTrackNoise);
    std::normal_distribution<double> noise(0.0, model.pos_sigma_m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < metrics::kNumJoints; ++j) {
        const Vec3 d(noise(rng), noise(rng), noise(rng));
        out.log.joint_offsets[i][j] += d;
        out.data.frames[i].joints[j] += d;
      }
    }
  }

  if (!model.spikes.empty()) {
    // Spike sizes refer to the profile before any spike is added.
    const auto base = speed_stats(kinematics::joint_velocities(out.data));
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = track.frames[i].t;
    auto rng = stream(seed, kTagSpikeDir);
    for (const auto& sp : model.spikes) {
      SpikeRecord rec;
      rec.frame = sp.frame;
      rec.magnitude = sp.magnitude;
      rec.sigma_base = base.sigma;
      rec.displacement = unit_vector(rng) * spike_distance(base, sp.magnitude, stencil_span(t, sp.frame));
      rec.velocity_frames = velocity_footprint(sp.frame, n);
      for (std::size_t j = 0; j < metrics::kNumJoints; ++j) {
        out.data.frames[sp.frame].joints[j] += rec.displacement;
        out.log.joint_offsets[sp.frame][j] += rec.displacement;
      }
      out.log.spikes.push_back(std::move(rec));
    }
  }
  return out;
}

Perturbed<Trajectory> perturb_trajectory(const Trajectory& traj, const NoiseModel& model, std::uint64_t seed) {
  check_model(model);
  const std::size_t n = traj.samples.size();
  check_spikes(model.spikes, n);
  Perturbed<Trajectory> out{traj, {}};
  out.log.pose_offsets.assign(n, geometry::PoseSE3::identity());

  if (model.pos_sigma_m > 0.0 || model.rot_sigma_deg > 0.0) {
    auto rng = stream(seed, kTagPoseNoise);
    std::normal_distribution<double> unit(0.0, 1.0);
    const double rot_sigma = model.rot_sigma_deg * std::numbers::pi / 180.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3 dp(unit(rng) * model.pos_sigma_m, unit(rng) * model.pos_sigma_m,
                    unit(rng) * model.pos_sigma_m);
      const Vec3 w(unit(rng) * rot_sigma, unit(rng) * rot_sigma, unit(rng) * rot_sigma);
      geometry::PoseSE3 offset;
      offset.rotation = w.norm() > 0.0 ? geometry::UnitQuaternion::from_axis_angle(w / w.norm(), w.norm())
                                       : geometry::UnitQuaternion::identity();
      // Rotate about the camera centre, then shift: the position error is exactly dp.
      const Vec3 c = traj.samples[i].pose.translation;
      offset.translation = c - offset.rotation.rotate(c) + dp;
      out.log.pose_offsets[i] = offset;
      out.data.samples[i].pose = geometry::compose_se3(offset, traj.samples[i].pose);
    }
  }

  if (!model.spikes.empty() && n >= 3) {
    // Camera-centre speed profile, same difference scheme as the hand track.
    HandTrack centres;
    centres.frame_rate = 1.0;
    for (const auto& s : out.data.samples) {
      metrics::JointFrame f{s.t, {}};
      f.joints.fill(s.pose.translation);
      centres.frames.push_back(f);
    }
    const auto base = speed_stats(kinematics::joint_velocities(centres));
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = traj.samples[i].t;
    auto rng = stream(seed, kTagSpikeDir);
    for (const auto& sp : model.spikes) {
      SpikeRecord rec;
      rec.frame = sp.frame;
      rec.magnitude = sp.magnitude;
      rec.sigma_base = base.sigma;
      rec.displacement = unit_vector(rng) * spike_distance(base, sp.magnitude, stencil_span(t, sp.frame));
      rec.velocity_frames = velocity_footprint(sp.frame, n);
      out.data.samples[sp.frame].pose.translation += rec.displacement;
      out.log.pose_offsets[sp.frame].translation += rec.displacement;
      out.log.spikes.push_back(std::move(rec));
    }
  }
  return out;
}

Perturbed<std::vector<qc::PixelFrame>> perturb_pixels(const std::vector<qc::PixelFrame>& pixels,
                                                      const NoiseModel& model, std::uint64_t seed) {
  check_model(model);
  Perturbed<std::vector<qc::PixelFrame>> out{pixels, {}};
  out.log.pixel_offsets.resize(pixels.size());
  auto rng = stream(seed, kTagPixelNoise);
  std::normal_distribution<double> noise(0.0, model.pixel_sigma_px);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    for (std::size_t j = 0; j < metrics::kNumJoints; ++j) {
      Eigen::Vector2d d = model.pixel_offset_px;
      if (model.pixel_sigma_px > 0.0) {
        d.x() += noise(rng);
        d.y() += noise(rng);
      }
      out.log.pixel_offsets[i][j] = d;
      out.data[i][j].u += d.x();
      out.data[i][j].v += d.y();
    }
  }
  return out;
}

std::vector<CorpusClip> gen_qc_corpus(const CorpusRecipe& recipe) {
  if (!(recipe.spike_fraction >= 0.0 && recipe.spike_fraction <= 1.0) ||
      !(recipe.reproj_fraction >= 0.0 && recipe.reproj_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "corpus fractions must be in [0, 1]");
  }
  auto rng = stream(recipe.seed, kTagCorpus);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const auto intr = default_intrinsics();

  std::vector<CorpusClip> corpus;
  corpus.reserve(recipe.n_clips);
  for (std::size_t c = 0; c < recipe.n_clips; ++c) {
    const bool spike = u01(rng) < recipe.spike_fraction;
    const bool offset = u01(rng) < recipe.reproj_fraction;
    const double spike_pick = u01(rng);

    char id[32];
    std::snprintf(id, sizeof id, "clip-%04zu", c);
    const std::uint64_t clip_seed = recipe.seed * 1000003ULL + c;

    // Clean clips must be clean under the detector itself; a draw whose
    // smooth motion already trips mean + 3 sigma is re-sampled.
    Trajectory traj;
    GeneratedHand hand;
    for (std::uint64_t attempt = 0;; ++attempt) {
      const std::uint64_t s = clip_seed + attempt * 0x100000001B3ULL;
      traj = gen_trajectory(s, recipe.duration_s, recipe.fps);
      hand = gen_hand_track(traj, s, intr);
      const auto flags = kinematics::detect_outliers(kinematics::joint_velocities(hand.world), 3.0);
      if (flags.flagged_frames().empty()) break;
    }

    NoiseModel model;
    model.pixel_sigma_px = recipe.pixel_sigma_px;
    if (offset) model.pixel_offset_px = Eigen::Vector2d(recipe.reproj_offset_px, 0.0);
    auto pixels = perturb_pixels(hand.pixels, model, clip_seed);

    CorpusClip out;
    out.clip.clip_id = id;
    out.clip.camera_traj = traj;
    out.clip.intrinsics = intr;
    out.clip.observed = std::move(pixels.data);
    out.pixel_offset_px = offset ? recipe.reproj_offset_px : 0.0;
    out.clip.world_track = hand.world;
    if (spike) {
      const std::size_t n = hand.world.frames.size();
      NoiseModel spike_model;
      spike_model.spikes.push_back({std::min(n - 1, static_cast<std::size_t>(spike_pick * n)),
                                    recipe.spike_magnitude});
      auto track = perturb_track(hand.world, spike_model, clip_seed);
      out.clip.world_track = std::move(track.data);
      out.spikes = std::move(track.log.spikes);
    }
    corpus.push_back(std::move(out));
  }
  return corpus;
}

namespace {

std::string region_id(int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "region-%02d", i);
  return buf;
}

std::string device_id(int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "dev-%05d", i);
  return buf;
}

}  // namespace

void place_devices(fleet::FleetScenario& sc, int n_devices, double radius_km, std::uint64_t seed) {
  if (sc.regions.empty()) throw Error(ErrorCode::kInvalidScenario, "no regions to place devices around");
  auto rng = stream(seed, kTagDevices);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int d = 0; d < n_devices; ++d) {
    const auto& region = sc.regions[static_cast<std::size_t>(d) % sc.regions.size()];
    const double bearing = 2.0 * std::numbers::pi * u01(rng);
    const double dist = radius_km * std::sqrt(u01(rng));  // uniform over the disc
    sc.devices.push_back({device_id(d), fleet::destination(region.location, bearing, dist)});
  }
}

fleet::FleetScenario gen_fleet_topology(const ScenarioRecipe& recipe) {
  fleet::FleetScenario sc;
  sc.seed = recipe.seed;
  auto rng = stream(recipe.seed, kTagFleet);

  if (recipe.named == kPaperLatencyScenario) {
    sc.name = kPaperLatencyScenario;
    sc.regions = {
        {"sa-east", {-23.5, -46.6}, 1000.0, true, 0.0},
        {"ap-northeast", {35.7, 139.7}, 1000.0, true, 0.0},
        {"ap-south", {19.1, 72.9}, 1000.0, true, 0.0},
    };
    sc.central_node = "sa-east";
    sc.latency = {0.05, 5.0, 0.1};
    place_devices(sc, 300, 500.0, recipe.seed);
    sc.workload = {{0.0, 600.0, 5.0}};
    sc.routing = fleet::RoutingMode::kGeoDnsPlusProbes;
    sc.validate();
    return sc;
  }

  if (!recipe.named.empty()) {
    throw Error(ErrorCode::kInvalidScenario, "unknown named scenario '" + recipe.named + "'");
  }
  if (recipe.n_regions < 1 || recipe.n_devices < 1) {
    throw Error(ErrorCode::kInvalidScenario, "need at least one region and one device");
  }
  if (!(recipe.duration_s > 0.0) || !(recipe.rate_per_s >= 0.0) || !(recipe.device_radius_km >= 0.0)) {
    throw Error(ErrorCode::kInvalidScenario, "duration must be > 0, rate and radius >= 0");
  }
  sc.name = "generated";
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int r = 0; r < recipe.n_regions; ++r) {
    // Uniform on the sphere, restricted to |lat| <= 60.
    const double s = std::sin(60.0 * std::numbers::pi / 180.0);
    const double lat = std::asin((2.0 * u01(rng) - 1.0) * s) * 180.0 / std::numbers::pi;
    const double lon = 360.0 * u01(rng) - 180.0;
    sc.regions.push_back({region_id(r), {lat, lon <= -180.0 ? 180.0 : lon}, 1000.0, true, 0.0});
  }
  sc.central_node = sc.regions.front().node_id;
  place_devices(sc, recipe.n_devices, recipe.device_radius_km, recipe.seed);
  sc.workload = {{0.0, recipe.duration_s, recipe.rate_per_s}};
  sc.validate();
  return sc;
}

}  // namespace egocollect::synth
