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

#include "egocollect/qc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "egocollect/error.hpp"

namespace egocollect::qc {

void QCThresholds::validate() const {
  if (!(sigma_k > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sigma_k must be > 0");
  if (!(reproj_px > 0.0)) throw Error(ErrorCode::kInvalidArgument, "reproj_px must be > 0");
  if (!(inspect_rate >= 0.0 && inspect_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "inspect_rate must be in [0, 1]");
  }
}

ReprojectionResult reprojection_error(const HandTrack& world_joints, const Trajectory& camera_traj,
                                      const CameraIntrinsics& intr,
                                      const std::vector<PixelFrame>& observed) {
  if (observed.size() != world_joints.frames.size()) {
    throw Error(ErrorCode::kLengthMismatch, "observed pixels must cover every track frame");
  }
  const auto pairs = kinematics::associate_track(world_joints, camera_traj);

  ReprojectionResult out;
  out.per_frame_mean_px.assign(world_joints.frames.size(), std::numeric_limits<double>::quiet_NaN());
  double total = 0.0;
  std::size_t total_count = 0;
  for (const auto& p : pairs) {
    const auto camera_from_world = geometry::invert(camera_traj.samples[p.gt].pose);
    const auto& frame = world_joints.frames[p.est];
    double frame_sum = 0.0;
    std::size_t frame_count = 0;
    for (std::size_t j = 0; j < metrics::kNumJoints; ++j) {
      const auto p_cam = geometry::apply(camera_from_world, frame.joints[j]);
      if (!(p_cam.z() > 0.0)) {
        ++out.behind_camera_joints;
        continue;
      }
      const auto px = geometry::project(intr, p_cam);
      const auto& obs = observed[p.est][j];
      frame_sum += std::hypot(px.u - obs.u, px.v - obs.v);
      ++frame_count;
    }
    if (frame_count == 0) continue;
    const double frame_mean = frame_sum / static_cast<double>(frame_count);
    out.per_frame_mean_px[p.est] = frame_mean;
    out.max_frame_mean_px = std::max(out.max_frame_mean_px, frame_mean);
    total += frame_sum;
    total_count += frame_count;
    ++out.evaluated_frames;
  }
  if (total_count == 0) {
    throw Error(ErrorCode::kAllBehindCamera, "no joint in front of the camera");
  }
  out.clip_mean_px = total / static_cast<double>(total_count);
  return out;
}

bool QCVerdict::has_reason(ReasonKind kind) const {
  return std::any_of(reasons.begin(), reasons.end(), [kind](const Reason& r) { return r.kind == kind; });
}

QCVerdict check_clip(const AnnotatedClip& clip, const QCThresholds& thresholds) {
  QCVerdict verdict;
  verdict.clip_id = clip.clip_id;
  try {
    thresholds.validate();
    const auto profile = kinematics::joint_velocities(clip.world_track);
    const auto flags = kinematics::detect_outliers(profile, thresholds.sigma_k);
    const auto flagged = flags.flagged_frames();
    verdict.stats.flagged_frames = flagged.size();
    verdict.stats.velocity_mean = flags.mean_used;
    verdict.stats.velocity_sigma = flags.sigma_used;

    const auto reproj =
        reprojection_error(clip.world_track, clip.camera_traj, clip.intrinsics, clip.observed);
    verdict.stats.mean_reproj_px = reproj.clip_mean_px;
    verdict.stats.max_reproj_px = reproj.max_frame_mean_px;

    if (!flagged.empty()) {
      Reason r;
      r.kind = ReasonKind::kVelocityOutlier;
      r.frames = flagged;
      verdict.reasons.push_back(std::move(r));
    }
    if (reproj.clip_mean_px > thresholds.reproj_px) {
      Reason r;
      r.kind = ReasonKind::kReprojection;
      r.mean_px = reproj.clip_mean_px;
      verdict.reasons.push_back(std::move(r));
    }
  } catch (const Error& e) {
    verdict.reasons.clear();
    Reason r;
    r.kind = ReasonKind::kMalformed;
    r.message = e.what();
    verdict.reasons.push_back(std::move(r));
  }

  if (!verdict.reasons.empty()) {
    verdict.outcome = Outcome::kFail;
  } else if (sample_for_inspection(clip.clip_id, thresholds.inspect_rate)) {
    verdict.outcome = Outcome::kInspectSampled;
  } else {
    verdict.outcome = Outcome::kPass;
  }
  return verdict;
}

std::uint64_t stable_hash(std::string_view id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  // splitmix64 finalizer; plain FNV-1a leaves the top bits nearly constant
  // for ids that differ only in their last characters.
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

bool sample_for_inspection(std::string_view clip_id, double rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rate must be in [0, 1]");
  }
  const double u = static_cast<double>(stable_hash(clip_id) >> 11) * 0x1.0p-53;
  return u < rate;
}

Category categorize(const std::vector<Reason>& reasons) {
  bool kin = false;
  bool rep = false;
  for (const auto& r : reasons) {
    kin |= r.kind == ReasonKind::kVelocityOutlier;
    rep |= r.kind == ReasonKind::kReprojection;
  }
  if (kin && rep) return Category::kBoth;
  if (kin) return Category::kKinematic;
  if (rep) return Category::kReprojection;
  return Category::kMalformed;
}

const HardNegativeEntry& HardNegativePool::route_failed(const QCVerdict& verdict, double enqueued_at) {
  if (verdict.outcome != Outcome::kFail) {
    throw Error(ErrorCode::kNotAFailure, "clip " + verdict.clip_id + " did not fail QC");
  }
  HardNegativeEntry entry{verdict.clip_id, verdict.reasons, categorize(verdict.reasons), enqueued_at};
  if (auto it = index_.find(verdict.clip_id); it != index_.end()) {
    entries_[it->second] = std::move(entry);
    return entries_[it->second];
  }
  index_.emplace(verdict.clip_id, entries_.size());
  entries_.push_back(std::move(entry));
  return entries_.back();
}

std::vector<HardNegativeEntry> HardNegativePool::drain(Category category) {
  auto matches = [category](const HardNegativeEntry& e) {
    if (e.category == category) return true;
    return e.category == Category::kBoth &&
           (category == Category::kKinematic || category == Category::kReprojection);
  };
  std::vector<HardNegativeEntry> taken;
  std::vector<HardNegativeEntry> kept;
  for (auto& e : entries_) {
    (matches(e) ? taken : kept).push_back(std::move(e));
  }
  entries_ = std::move(kept);
  reindex();
  return taken;
}

void HardNegativePool::reindex() {
  index_.clear();
  for (std::size_t i = 0; i < entries_.size(); ++i) index_.emplace(entries_[i].clip_id, i);
}

const HardNegativeEntry& route_failed(const QCVerdict& verdict, HardNegativePool& pool,
                                      double enqueued_at) {
  return pool.route_failed(verdict, enqueued_at);
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kPass: return "PASS";
    case Outcome::kFail: return "FAIL";
    case Outcome::kInspectSampled: return "INSPECT_SAMPLED";
  }
  return "?";
}

std::string_view to_string(ReasonKind kind) {
  switch (kind) {
    case ReasonKind::kVelocityOutlier: return "VELOCITY_OUTLIER";
    case ReasonKind::kReprojection: return "REPROJECTION";
    case ReasonKind::kMalformed: return "MALFORMED";
  }
  return "?";
}

std::string_view to_string(Category category) {
  switch (category) {
    case Category::kKinematic: return "KINEMATIC";
    case Category::kReprojection: return "REPROJECTION";
    case Category::kBoth: return "BOTH";
    case Category::kMalformed: return "MALFORMED";
  }
  return "?";
}

}  // namespace egocollect::qc
