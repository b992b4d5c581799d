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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "egocollect/error.hpp"
#include "egocollect/qc.hpp"
#include "egocollect/synth.hpp"
#include "fixtures.hpp"

using namespace egocollect;
using namespace egocollect::qc;

namespace {

AnnotatedClip shifted(AnnotatedClip c, double du, double dv) {
  for (auto& f : c.observed) {
    for (auto& p : f) {
      p.u += du;
      p.v += dv;
    }
  }
  return c;
}

QCThresholds relaxed() {
  QCThresholds t;
  t.sigma_k = std::numeric_limits<double>::max();
  t.reproj_px = std::numeric_limits<double>::max();
  return t;
}

}  // namespace

TEST(Reprojection, ConsistentObservationIsZero) {
  const auto c = fixture::clean_clip(61);
  const auto r = reprojection_error(c.world_track, c.camera_traj, c.intrinsics, c.observed);
  EXPECT_LT(r.clip_mean_px, 1e-6);
  EXPECT_EQ(r.behind_camera_joints, 0u);
  EXPECT_EQ(r.evaluated_frames, c.observed.size());
}

TEST(Reprojection, ThreeFourFive) {
  const auto c = shifted(fixture::clean_clip(62), 3.0, 4.0);
  const auto r = reprojection_error(c.world_track, c.camera_traj, c.intrinsics, c.observed);
  EXPECT_NEAR(r.clip_mean_px, 5.0, 1e-6);
  EXPECT_NEAR(r.max_frame_mean_px, 5.0, 1e-6);
}

TEST(Reprojection, RayleighMean) {
  const auto c = fixture::clean_clip(63, 4.0);  // 120 frames x 21 joints
  synth::NoiseModel m;
  m.pixel_sigma_px = 2.0;
  auto noisy = c;
  noisy.observed = synth::perturb_pixels(c.observed, m, 9).data;
  const auto r = reprojection_error(noisy.world_track, noisy.camera_traj, noisy.intrinsics, noisy.observed);
  const double expected = 2.0 * std::sqrt(M_PI / 2.0);
  EXPECT_NEAR(r.clip_mean_px, expected, 0.1 * expected);
}

TEST(Reprojection, LengthMismatch) {
  auto c = fixture::clean_clip(64);
  c.observed.pop_back();
  EXPECT_THROW(reprojection_error(c.world_track, c.camera_traj, c.intrinsics, c.observed), Error);
}

TEST(Reprojection, AllBehindCamera) {
  auto c = fixture::clean_clip(65);
  for (std::size_t f = 0; f < c.world_track.frames.size(); ++f) {
    const auto& pose = c.camera_traj.samples[f].pose;
    for (auto& j : c.world_track.frames[f].joints) {
      j = geometry::apply(pose, geometry::Vec3(0, 0, -1));
    }
  }
  try {
    reprojection_error(c.world_track, c.camera_traj, c.intrinsics, c.observed);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAllBehindCamera);
  }
}

TEST(CheckClip, CleanClipPasses) {
  QCThresholds t;
  t.inspect_rate = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto v = check_clip(fixture::clean_clip(70 + s), t);
    EXPECT_EQ(v.outcome, Outcome::kPass) << s;
    EXPECT_TRUE(v.reasons.empty());
  }
}

TEST(CheckClip, SpikeFailsWithMatchingFrames) {
  auto c = fixture::clean_clip(71);
  synth::NoiseModel m;
  m.spikes.push_back({17, 10.0});
  const auto p = synth::perturb_track(c.world_track, m, 3);
  c.world_track = p.data;
  ASSERT_EQ(p.log.spikes.size(), 1u);
  EXPECT_EQ(p.log.spikes[0].frame, 17u);
  EXPECT_EQ(p.log.spikes[0].magnitude, 10.0);
  QCThresholds t;
  t.reproj_px = 1e9;
  const auto v = check_clip(c, t);
  ASSERT_EQ(v.outcome, Outcome::kFail);
  ASSERT_EQ(v.reasons.size(), 1u);
  EXPECT_EQ(v.reasons[0].kind, ReasonKind::kVelocityOutlier);
  EXPECT_EQ(v.reasons[0].frames, p.log.spikes[0].velocity_frames);
  EXPECT_EQ(v.reasons[0].frames, (std::vector<std::size_t>{16, 18}));
}

TEST(CheckClip, PixelOffsetThreshold) {
  QCThresholds t;
  t.inspect_rate = 0.0;
  const auto six = check_clip(shifted(fixture::clean_clip(72), 6.0, 0.0), t);
  ASSERT_EQ(six.outcome, Outcome::kFail);
  ASSERT_EQ(six.reasons.size(), 1u);
  EXPECT_EQ(six.reasons[0].kind, ReasonKind::kReprojection);
  EXPECT_NEAR(six.reasons[0].mean_px, 6.0, 1e-6);
  EXPECT_EQ(check_clip(shifted(fixture::clean_clip(72), 4.0, 0.0), t).outcome, Outcome::kPass);
}

TEST(CheckClip, MalformedClipFails) {
  auto c = fixture::clean_clip(73);
  c.observed.resize(3);
  const auto v = check_clip(c);
  EXPECT_EQ(v.outcome, Outcome::kFail);
  EXPECT_TRUE(v.has_reason(ReasonKind::kMalformed));
}

TEST(CheckClip, DeterministicAndMonotone) {
  synth::CorpusRecipe r;
  r.n_clips = 30;
  for (const auto& cc : synth::gen_qc_corpus(r)) {
    const auto a = check_clip(cc.clip), b = check_clip(cc.clip);
    EXPECT_EQ(a.outcome, b.outcome);
    EXPECT_EQ(a.stats.mean_reproj_px, b.stats.mean_reproj_px);
    EXPECT_EQ(a.stats.flagged_frames, b.stats.flagged_frames);
    if (a.outcome == Outcome::kFail && !a.has_reason(ReasonKind::kMalformed)) {
      EXPECT_NE(check_clip(cc.clip, relaxed()).outcome, Outcome::kFail);
    }
  }
}

TEST(Inspection, RateBounds) {
  for (int i = 0; i < 200; ++i) {
    const auto id = "id-" + std::to_string(i);
    EXPECT_FALSE(sample_for_inspection(id, 0.0));
    EXPECT_TRUE(sample_for_inspection(id, 1.0));
  }
  EXPECT_THROW(sample_for_inspection("x", 1.5), Error);
}

TEST(Inspection, FractionAndStability) {
  std::size_t hits = 0;
  for (int i = 0; i < 10000; ++i) hits += sample_for_inspection("clip-" + std::to_string(i), 0.05) ? 1 : 0;
  const double frac = hits / 10000.0;
  EXPECT_GE(frac, 0.04);
  EXPECT_LE(frac, 0.06);
  std::size_t again = 0;
  for (int i = 0; i < 10000; ++i) again += sample_for_inspection("clip-" + std::to_string(i), 0.05) ? 1 : 0;
  EXPECT_EQ(again, hits);
}

TEST(Inspection, HashIsFnvThenSplitmix) {
  auto fnv = [](std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  };
  auto mix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  for (const char* id : {"", "a", "clip-0001", "device-42/seg3"}) EXPECT_EQ(stable_hash(id), mix(fnv(id)));
}

TEST(Pool, CategoryBoth) {
  QCVerdict v{"c", Outcome::kFail, {{ReasonKind::kVelocityOutlier, {3}, 0, ""}, {ReasonKind::kReprojection, {}, 7, ""}}, {}};
  HardNegativePool pool;
  EXPECT_EQ(pool.route_failed(v).category, Category::kBoth);
}

TEST(Pool, RerouteReplacesEntry) {
  HardNegativePool pool;
  QCVerdict v{"c", Outcome::kFail, {{ReasonKind::kVelocityOutlier, {3}, 0, ""}}, {}};
  pool.route_failed(v, 1.0);
  v.reasons = {{ReasonKind::kReprojection, {}, 9, ""}};
  const auto& e = pool.route_failed(v, 2.0);
  EXPECT_EQ(pool.size(), 1u);
  EXPECT_EQ(e.category, Category::kReprojection);
  EXPECT_EQ(e.enqueued_at, 2.0);
}

TEST(Pool, RejectsNonFailures) {
  HardNegativePool pool;
  QCVerdict v{"c", Outcome::kPass, {}, {}};
  try {
    pool.route_failed(v);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotAFailure);
  }
}

TEST(Pool, DrainFollowsSetAlgebra) {
  std::mt19937_64 rng(74);
  std::uniform_int_distribution<int> pick(0, 3);
  HardNegativePool pool;
  std::set<std::string> vel, rep, both, mal;
  for (int i = 0; i < 50; ++i) {
    QCVerdict v;
    v.clip_id = "f" + std::to_string(i);
    v.outcome = Outcome::kFail;
    switch (pick(rng)) {
      case 0: v.reasons = {{ReasonKind::kVelocityOutlier, {1}, 0, ""}}; vel.insert(v.clip_id); break;
      case 1: v.reasons = {{ReasonKind::kReprojection, {}, 8, ""}}; rep.insert(v.clip_id); break;
      case 2:
        v.reasons = {{ReasonKind::kVelocityOutlier, {1}, 0, ""}, {ReasonKind::kReprojection, {}, 8, ""}};
        both.insert(v.clip_id);
        break;
      default: v.reasons = {{ReasonKind::kMalformed, {}, 0, "x"}}; mal.insert(v.clip_id); break;
    }
    pool.route_failed(v);
  }
  std::set<std::string> expected = vel;
  expected.insert(both.begin(), both.end());
  std::set<std::string> got;
  for (const auto& e : pool.drain(Category::kKinematic)) got.insert(e.clip_id);
  EXPECT_EQ(got, expected);
  EXPECT_EQ(pool.size(), rep.size() + mal.size());
  got.clear();
  for (const auto& e : pool.drain(Category::kReprojection)) got.insert(e.clip_id);
  EXPECT_EQ(got, rep);  // BOTH entries already left with the kinematic drain
  EXPECT_EQ(pool.size(), mal.size());
  for (const auto& id : mal) EXPECT_TRUE(pool.contains(id));
}

TEST(Corpus, VelocityFailuresEqualSpikeLog) {
  synth::CorpusRecipe r;
  QCThresholds t;
  std::size_t spiked = 0;
  for (const auto& cc : synth::gen_qc_corpus(r)) {
    const auto v = check_clip(cc.clip, t);
    EXPECT_EQ(v.has_reason(ReasonKind::kVelocityOutlier), !cc.spikes.empty()) << cc.clip.clip_id;
    if (!cc.spikes.empty()) {
      ++spiked;
      std::vector<std::size_t> frames;
      for (const auto& s : cc.spikes) frames.insert(frames.end(), s.velocity_frames.begin(), s.velocity_frames.end());
      for (const auto& reason : v.reasons) {
        if (reason.kind == ReasonKind::kVelocityOutlier) EXPECT_EQ(reason.frames, frames);
      }
    } else {
      EXPECT_EQ(v.has_reason(ReasonKind::kReprojection), cc.pixel_offset_px > 0.0) << cc.clip.clip_id;
    }
  }
  EXPECT_GT(spiked, 10u);
}

TEST(Thresholds, Validate) {
  QCThresholds t;
  t.sigma_k = 0;
  EXPECT_THROW(t.validate(), Error);
  t = {};
  t.inspect_rate = -0.1;
  EXPECT_THROW(t.validate(), Error);
}
