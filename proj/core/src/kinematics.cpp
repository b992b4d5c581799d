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

#include "egocollect/kinematics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "egocollect/error.hpp"

namespace egocollect::kinematics {

namespace {

// Banded LDL^T factorization of I + lambda * D^T D, where D is the second
// difference operator. Bandwidth 2.
class SecondDifferenceSystem {
 public:
  SecondDifferenceSystem(int n, double lambda) : n_(n), d_(n), l1_(n, 0.0), l2_(n, 0.0) {
    std::vector<double> a0(n, 1.0), a1(n, 0.0), a2(n, 0.0);  // diag, 1st and 2nd sub-diagonal
    for (int r = 0; r + 2 < n; ++r) {
      const double c[3] = {1.0, -2.0, 1.0};
      for (int p = 0; p < 3; ++p) {
        for (int q = 0; q <= p; ++q) {
          const double v = lambda * c[p] * c[q];
          const int i = r + p;
          const int off = p - q;
          if (off == 0) a0[i] += v;
          else if (off == 1) a1[i] += v;
          else a2[i] += v;
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      if (i >= 2) l2_[i] = a2[i] / d_[i - 2];
      if (i >= 1) {
        double s = a1[i];
        if (i >= 2) s -= l2_[i] * d_[i - 2] * l1_[i - 1];
        l1_[i] = s / d_[i - 1];
      }
      double diag = a0[i];
      if (i >= 1) diag -= l1_[i] * l1_[i] * d_[i - 1];
      if (i >= 2) diag -= l2_[i] * l2_[i] * d_[i - 2];
      d_[i] = diag;
    }
  }

  void solve(std::vector<double>& x) const {
    for (int i = 0; i < n_; ++i) {
      if (i >= 1) x[i] -= l1_[i] * x[i - 1];
      if (i >= 2) x[i] -= l2_[i] * x[i - 2];
    }
    for (int i = 0; i < n_; ++i) x[i] /= d_[i];
    for (int i = n_ - 1; i >= 0; --i) {
      if (i + 1 < n_) x[i] -= l1_[i + 1] * x[i + 1];
      if (i + 2 < n_) x[i] -= l2_[i + 2] * x[i + 2];
    }
  }

 private:
  int n_;
  std::vector<double> d_, l1_, l2_;
};

}  // namespace

void HandTrack::validate() const {
  if (!(frame_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "frame_rate must be positive");
  }
  const double period = 1.0 / frame_rate;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const double dt = frames[i].t - frames[i - 1].t;
    if (!(dt > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "timestamps not increasing at frame " + std::to_string(i));
    }
    if (std::abs(dt - period) > 0.1 * period) {
      throw Error(ErrorCode::kInvalidArgument,
                  "frame spacing inconsistent with frame_rate at frame " + std::to_string(i));
    }
  }
}

std::vector<metrics::IndexPair> associate_track(const HandTrack& track, const Trajectory& camera_traj) {
  std::vector<double> tt;
  tt.reserve(track.frames.size());
  for (const auto& f : track.frames) tt.push_back(f.t);
  const auto tc = camera_traj.timestamps();
  return metrics::associate_timestamps(tt, tc, 0.5 / track.frame_rate);
}

ToWorldResult to_world(const HandTrack& track, const Trajectory& camera_traj) {
  const auto pairs = associate_track(track, camera_traj);
  ToWorldResult out;
  out.track.frame_rate = track.frame_rate;
  out.track.frame_of_reference = FrameOfReference::kWorld;
  out.track.frames.reserve(pairs.size());
  for (const auto& p : pairs) {
    const auto& pose = camera_traj.samples[p.gt].pose;
    JointFrame f;
    f.t = track.frames[p.est].t;
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      f.joints[j] = geometry::apply(pose, track.frames[p.est].joints[j]);
    }
    out.track.frames.push_back(f);
  }
  out.dropped_frames = track.frames.size() - pairs.size();
  return out;
}

VelocityProfile joint_velocities(const HandTrack& track) {
  const std::size_t n = track.frames.size();
  if (n < 3) {
    throw Error(ErrorCode::kTooShort, "need at least 3 frames, got " + std::to_string(n));
  }
  VelocityProfile out;
  out.speeds.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    const double dt = track.frames[hi].t - track.frames[lo].t;
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      out.speeds[i][j] = (track.frames[hi].joints[j] - track.frames[lo].joints[j]).norm() / dt;
    }
  }
  return out;
}

std::vector<std::size_t> OutlierFlags::flagged_frames() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i]) out.push_back(i);
  }
  return out;
}

OutlierFlags detect_outliers(const VelocityProfile& profile, double k) {
  const std::size_t n = profile.speeds.size();
  if (n < 3) {
    throw Error(ErrorCode::kTooShort, "need at least 3 frames, got " + std::to_string(n));
  }
  const double count = static_cast<double>(n * kNumJoints);
  double sum = 0.0;
  for (const auto& row : profile.speeds) {
    for (double s : row) sum += s;
  }
  const double mean = sum / count;
  double var = 0.0;
  for (const auto& row : profile.speeds) {
    for (double s : row) var += (s - mean) * (s - mean);
  }
  const double sigma = std::sqrt(var / count);

  OutlierFlags out;
  out.mean_used = mean;
  out.sigma_used = sigma;
  out.flags.assign(n, false);
  out.degenerate_sigma = sigma == 0.0;
  const double threshold = mean + k * sigma;
  for (std::size_t i = 0; i < n; ++i) {
    for (double s : profile.speeds[i]) {
      const bool hit = out.degenerate_sigma ? s != mean : s > threshold;
      if (hit) {
        out.flags[i] = true;
        break;
      }
    }
  }
  return out;
}

HandTrack sliding_window_smooth(const HandTrack& track, int window, double lambda_acc) {
  if (window < 3 || window % 2 == 0) {
    throw Error(ErrorCode::kBadWindow, "window must be odd and >= 3, got " + std::to_string(window));
  }
  if (!(lambda_acc >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda_acc must be >= 0");
  }
  const int n = static_cast<int>(track.frames.size());
  if (window > n) {
    throw Error(ErrorCode::kWindowTooLarge,
                "window " + std::to_string(window) + " exceeds " + std::to_string(n) + " frames");
  }
  HandTrack out = track;
  if (lambda_acc == 0.0) return out;

  const SecondDifferenceSystem system(window, lambda_acc);
  const int half = window / 2;
  std::vector<double> buf(static_cast<std::size_t>(window));
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    for (int axis = 0; axis < 3; ++axis) {
      for (int start = 0; start + window <= n; ++start) {
        for (int i = 0; i < window; ++i) buf[i] = track.frames[start + i].joints[j](axis);
        system.solve(buf);
        const int center = start + half;
        out.frames[center].joints[j](axis) = buf[half];
        if (start == 0) {
          for (int i = 0; i < half; ++i) out.frames[i].joints[j](axis) = buf[i];
        }
        if (start + window == n) {
          for (int i = half + 1; i < window; ++i) out.frames[start + i].joints[j](axis) = buf[i];
        }
      }
    }
  }
  return out;
}

double total_squared_acceleration(const HandTrack& track) {
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < track.frames.size(); ++i) {
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      sum += (track.frames[i - 1].joints[j] - 2.0 * track.frames[i].joints[j] +
              track.frames[i + 1].joints[j])
                 .squaredNorm();
    }
  }
  return sum;
}

}  // namespace egocollect::kinematics
