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

#include "egocollect/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include "egocollect/error.hpp"

namespace egocollect::metrics {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kLengthMismatch,
                "frame counts differ (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

std::vector<Vec3> positions_of(const Trajectory& traj, const std::vector<IndexPair>& pairs,
                               bool est_side) {
  std::vector<Vec3> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    out.push_back(traj.samples[est_side ? p.est : p.gt].pose.translation);
  }
  return out;
}

}  // namespace

std::vector<double> Trajectory::timestamps() const {
  std::vector<double> ts;
  ts.reserve(samples.size());
  for (const auto& s : samples) ts.push_back(s.t);
  return ts;
}

void Trajectory::validate() const {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].t)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite timestamp at sample " + std::to_string(i));
    }
    if (i > 0 && !(samples[i].t > samples[i - 1].t)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "timestamps not strictly increasing at sample " + std::to_string(i));
    }
  }
}

std::vector<IndexPair> associate_timestamps(std::span<const double> est,
                                            std::span<const double> gt, double max_dt) {
  if (!(max_dt > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "max_dt must be positive");
  }
  struct Candidate {
    double dt;
    std::size_t est;
    std::size_t gt;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < est.size(); ++i) {
    auto lo = std::lower_bound(gt.begin(), gt.end(), est[i] - max_dt);
    for (auto it = lo; it != gt.end() && *it <= est[i] + max_dt; ++it) {
      const double dt = std::abs(*it - est[i]);
      if (dt <= max_dt) {
        candidates.push_back({dt, i, static_cast<std::size_t>(it - gt.begin())});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.dt, a.est, a.gt) < std::tie(b.dt, b.est, b.gt);
  });

  std::vector<bool> est_used(est.size(), false);
  std::vector<bool> gt_used(gt.size(), false);
  std::vector<IndexPair> pairs;
  for (const auto& c : candidates) {
    if (est_used[c.est] || gt_used[c.gt]) continue;
    est_used[c.est] = true;
    gt_used[c.gt] = true;
    pairs.push_back({c.est, c.gt});
  }
  if (pairs.empty()) {
    throw Error(ErrorCode::kNoOverlap, "no timestamps within max_dt");
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const IndexPair& a, const IndexPair& b) { return a.est < b.est; });
  return pairs;
}

std::vector<IndexPair> associate(const Trajectory& est, const Trajectory& gt, double max_dt) {
  const auto te = est.timestamps();
  const auto tg = gt.timestamps();
  return associate_timestamps(te, tg, max_dt);
}

double default_max_dt(const Trajectory& traj) {
  if (traj.size() < 2) {
    throw Error(ErrorCode::kInsufficientPairs, "need at least 2 samples to infer a sampling interval");
  }
  std::vector<double> deltas;
  deltas.reserve(traj.size() - 1);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    deltas.push_back(traj.samples[i].t - traj.samples[i - 1].t);
  }
  const std::size_t mid = deltas.size() / 2;
  std::nth_element(deltas.begin(), deltas.begin() + static_cast<std::ptrdiff_t>(mid), deltas.end());
  double median = deltas[mid];
  if (deltas.size() % 2 == 0) {
    const double lower = *std::max_element(deltas.begin(), deltas.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (median + lower);
  }
  return 0.5 * median;
}

double ate_positions(std::span<const Vec3> est, std::span<const Vec3> gt, Alignment alignment) {
  const auto t = geometry::umeyama_align(est, gt, alignment == Alignment::kSim3);
  return std::sqrt(geometry::alignment_residual(t, est, gt) / static_cast<double>(est.size()));
}

double ate(const Trajectory& est, const Trajectory& gt, Alignment alignment,
           std::optional<double> max_dt) {
  const auto pairs = associate(est, gt, max_dt.value_or(default_max_dt(gt)));
  if (pairs.size() < 3) {
    throw Error(ErrorCode::kInsufficientPairs, "ATE needs at least 3 associated pairs");
  }
  const auto pe = positions_of(est, pairs, true);
  const auto pg = positions_of(gt, pairs, false);
  return ate_positions(pe, pg, alignment);
}

RpeResult rpe(const Trajectory& est, const Trajectory& gt, int delta_frames,
              std::optional<double> max_dt) {
  if (delta_frames < 1) {
    throw Error(ErrorCode::kInvalidArgument, "delta_frames must be >= 1");
  }
  const auto pairs = associate(est, gt, max_dt.value_or(default_max_dt(gt)));
  const auto delta = static_cast<std::size_t>(delta_frames);
  if (pairs.size() <= delta) {
    throw Error(ErrorCode::kInsufficientPairs,
                "need more than " + std::to_string(delta) + " associated pairs");
  }
  double trans_sq = 0.0;
  double rot_sq = 0.0;
  const std::size_t n = pairs.size() - delta;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& a = pairs[k];
    const auto& b = pairs[k + delta];
    const PoseSE3 gt_rel =
        geometry::compose_se3(geometry::invert(gt.samples[a.gt].pose), gt.samples[b.gt].pose);
    const PoseSE3 est_rel =
        geometry::compose_se3(geometry::invert(est.samples[a.est].pose), est.samples[b.est].pose);
    const PoseSE3 err = geometry::compose_se3(geometry::invert(gt_rel), est_rel);
    trans_sq += err.translation.squaredNorm();
    const double deg = err.rotation.angle() * 180.0 / std::numbers::pi;
    rot_sq += deg * deg;
  }
  return {std::sqrt(trans_sq / static_cast<double>(n)), std::sqrt(rot_sq / static_cast<double>(n)), n};
}

TrajectoryReport evaluate_trajectory(const Trajectory& est, const Trajectory& gt, int rpe_delta,
                                     std::optional<double> max_dt) {
  const double dt = max_dt.value_or(default_max_dt(gt));
  TrajectoryReport rep;
  rep.n_pairs = associate(est, gt, dt).size();
  rep.ate_rmse_m = ate(est, gt, Alignment::kSim3, dt);
  rep.ate_s_rmse_m = ate(est, gt, Alignment::kSE3, dt);
  const auto r = rpe(est, gt, rpe_delta, dt);
  rep.rpe_trans_rmse_m = r.trans_rmse_m;
  rep.rpe_rot_rmse_deg = r.rot_rmse_deg;
  return rep;
}

double mpjpe(std::span<const JointFrame> pred, std::span<const JointFrame> gt) {
  check_lengths(pred.size(), gt.size());
  if (pred.empty()) {
    throw Error(ErrorCode::kTooShort, "no frames");
  }
  double sum = 0.0;
  for (std::size_t f = 0; f < pred.size(); ++f) {
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      sum += (pred[f].joints[j] - gt[f].joints[j]).norm();
    }
  }
  return 1000.0 * sum / static_cast<double>(pred.size() * kNumJoints);
}

PaMpjpeResult pa_mpjpe(std::span<const JointFrame> pred, std::span<const JointFrame> gt) {
  check_lengths(pred.size(), gt.size());
  PaMpjpeResult out;
  double frame_sum = 0.0;
  std::size_t used = 0;
  for (std::size_t f = 0; f < pred.size(); ++f) {
    const auto& p = pred[f].joints;
    const auto& g = gt[f].joints;
    geometry::Sim3Transform t;
    try {
      t = geometry::umeyama_align(p, g, true);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateInput) throw;
      ++out.skipped_frames;
      continue;
    }
    double joint_sum = 0.0;
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      joint_sum += (geometry::apply_sim3(t, p[j]) - g[j]).norm();
    }
    frame_sum += joint_sum / static_cast<double>(kNumJoints);
    ++used;
  }
  if (used == 0) {
    throw Error(ErrorCode::kDegenerateInput, "every frame was degenerate");
  }
  out.mm = 1000.0 * frame_sum / static_cast<double>(used);
  return out;
}

PckResult pck_auc(std::span<const JointFrame> pred, std::span<const JointFrame> gt,
                  double max_threshold_mm, int n_steps) {
  check_lengths(pred.size(), gt.size());
  if (!(max_threshold_mm > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "max_threshold_mm must be positive");
  }
  if (n_steps < 2) {
    throw Error(ErrorCode::kInvalidArgument, "n_steps must be >= 2");
  }
  if (pred.empty()) {
    throw Error(ErrorCode::kTooShort, "no frames");
  }
  std::vector<double> errors;
  errors.reserve(pred.size() * kNumJoints);
  for (std::size_t f = 0; f < pred.size(); ++f) {
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      errors.push_back(1000.0 * (pred[f].joints[j] - gt[f].joints[j]).norm());
    }
  }
  std::sort(errors.begin(), errors.end());
  const double total = static_cast<double>(errors.size());
  auto fraction_within = [&](double threshold) {
    const auto it = std::upper_bound(errors.begin(), errors.end(), threshold);
    return static_cast<double>(it - errors.begin()) / total;
  };

  PckResult out;
  out.curve.reserve(static_cast<std::size_t>(n_steps));
  double prev = fraction_within(0.0);
  double area = 0.0;
  for (int k = 1; k <= n_steps; ++k) {
    const double threshold = max_threshold_mm * k / n_steps;
    const double frac = fraction_within(threshold);
    out.curve.push_back({threshold, frac});
    area += 0.5 * (prev + frac);
    prev = frac;
  }
  // Uniform spacing: integral / max == mean of the trapezoid heights.
  out.auc = std::clamp(area / n_steps, 0.0, 1.0);
  return out;
}

PoseReport evaluate_pose(std::span<const JointFrame> pred, std::span<const JointFrame> gt,
                         double auc_max_mm, int auc_steps) {
  PoseReport rep;
  rep.mpjpe_mm = mpjpe(pred, gt);
  rep.pa_mpjpe_mm = pa_mpjpe(pred, gt).mm;
  rep.auc = pck_auc(pred, gt, auc_max_mm, auc_steps).auc;
  rep.n_frames = pred.size();
  return rep;
}

}  // namespace egocollect::metrics
