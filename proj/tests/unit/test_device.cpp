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

#include <algorithm>
#include <random>

#include "egocollect/device.hpp"
#include "egocollect/error.hpp"
#include "egocollect/synth.hpp"

using namespace egocollect;
using namespace egocollect::device;

namespace {

struct Recorder : UploadSink {
  std::vector<UploadItem> items;
  void submit(const UploadItem& item) override { items.push_back(item); }
};

Device authorized(DeviceConfig cfg = {}) {
  Device d("dev-1", cfg);
  d.authorize();
  return d;
}

std::vector<Action> play(Device& d, const std::vector<DetectorEvent>& events) {
  std::vector<Action> all;
  for (const auto& ev : events) {
    auto a = d.on_event(ev);
    all.insert(all.end(), a.begin(), a.end());
  }
  return all;
}

std::size_t count(const std::vector<Action>& a, ActionKind k) {
  return static_cast<std::size_t>(std::count_if(a.begin(), a.end(), [k](const Action& x) { return x.kind == k; }));
}

}  // namespace

TEST(Recorder, NeverCrossingStaysMonitoring) {
  auto d = authorized();
  const auto a = play(d, scripted_stream({}, 60.0, 0.1, 0.5));
  EXPECT_TRUE(a.empty());
  EXPECT_EQ(d.mode(), Mode::kMonitoring);
  EXPECT_TRUE(d.gallery().empty());
}

TEST(Recorder, ShortInteractionIsDiscarded) {
  DeviceConfig cfg;
  cfg.min_duration_s = 5.0;
  auto d = authorized(cfg);
  const auto a = play(d, scripted_stream({{10.0, 13.0, 0.9}}, 30.0, 0.1));
  EXPECT_EQ(count(a, ActionKind::kDiscardClip), 1u);
  EXPECT_EQ(count(a, ActionKind::kSaveClip), 0u);
  EXPECT_TRUE(d.gallery().empty());
  const auto s = d.dashboard_stats();
  EXPECT_GT(s.total_recorded_s, 0.0);
  EXPECT_EQ(s.effective_interaction_s, 0.0);
}

TEST(Recorder, LongInteractionSavesOneClip) {
  DeviceConfig cfg;
  const double spacing = 0.1;
  auto d = authorized(cfg);
  play(d, scripted_stream({{5.0, 25.0, 0.9}}, 40.0, spacing));
  ASSERT_EQ(d.gallery().size(), 1u);
  const double dur = d.gallery()[0].duration();
  EXPECT_GE(dur, 20.0 - cfg.release_hold_s);
  EXPECT_LE(dur, 20.0 + spacing);
}

TEST(Recorder, HysteresisIgnoresShortDips) {
  auto d = authorized();
  // Score dips under release for 0.5 s, shorter than the 1 s hold.
  play(d, scripted_stream({{0.0, 5.0, 0.9}, {5.0, 5.5, 0.3}, {5.5, 12.0, 0.9}}, 20.0, 0.1, 0.1));
  ASSERT_EQ(d.gallery().size(), 1u);
  EXPECT_NEAR(d.gallery()[0].start_t, 0.0, 1e-12);
  EXPECT_NEAR(d.gallery()[0].end_t, 12.0, 1e-9);
}

TEST(Recorder, MidBandScoreDoesNotTrigger) {
  auto d = authorized();
  play(d, scripted_stream({{0.0, 10.0, 0.5}}, 20.0, 0.1));
  EXPECT_EQ(d.mode(), Mode::kMonitoring);
}

TEST(Recorder, UnauthorizedDropsEvents) {
  Device d("dev", {});
  play(d, scripted_stream({{0.0, 10.0, 0.9}}, 10.0, 1.0));
  EXPECT_TRUE(d.gallery().empty());
  EXPECT_EQ(d.dashboard_stats().dropped_events, 11u);
}

TEST(Recorder, OutOfOrderEventThrows) {
  auto d = authorized();
  d.on_event({5.0, false, 0.0});
  try {
    d.on_event({4.0, false, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfOrderEvent);
  }
}

TEST(Recorder, FlushClosesActiveRecording) {
  auto d = authorized();
  play(d, scripted_stream({{0.0, 100.0, 0.9}}, 10.0, 0.5));
  EXPECT_EQ(d.mode(), Mode::kRecording);
  const auto a = d.flush(10.0);
  EXPECT_EQ(count(a, ActionKind::kSaveClip), 1u);
  EXPECT_EQ(d.gallery()[0].duration(), 10.0);
}

TEST(Recorder, ReplayIsBitIdentical) {
  std::mt19937_64 rng(111);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<DetectorEvent> events;
  for (int i = 0; i < 5000; ++i) events.push_back({i * 0.05, u(rng) > 0.2, u(rng)});
  DeviceConfig cfg;
  RecorderState a, b;
  a.mode = b.mode = Mode::kMonitoring;
  std::vector<Action> acts_a, acts_b;
  for (const auto& ev : events) {
    auto r = step(a, ev, cfg);
    a = r.state;
    acts_a.insert(acts_a.end(), r.actions.begin(), r.actions.end());
  }
  for (const auto& ev : events) {
    auto r = step(b, ev, cfg);
    b = r.state;
    acts_b.insert(acts_b.end(), r.actions.begin(), r.actions.end());
  }
  EXPECT_EQ(a, b);
  ASSERT_EQ(acts_a.size(), acts_b.size());
  for (std::size_t i = 0; i < acts_a.size(); ++i) EXPECT_EQ(acts_a[i].end_t, acts_b[i].end_t);
}

TEST(Recorder, ExpectedPartitionOnScriptedDay) {
  DeviceConfig cfg;  // min 3 s, hold 1 s
  auto d = authorized(cfg);
  // Durations measured from trigger to first release sample.
  const std::vector<Interaction> day{{10, 12, 0.9}, {20, 40, 0.8}, {50, 52.5, 0.95},
                                     {60, 64, 0.7}, {100, 101, 0.9}, {120, 180, 0.9}};
  const auto acts = play(d, scripted_stream(day, 200.0, 0.1));
  std::vector<double> saved, discarded;
  for (const auto& a : acts) {
    if (a.kind == ActionKind::kSaveClip) saved.push_back(a.end_t - a.start_t);
    if (a.kind == ActionKind::kDiscardClip) discarded.push_back(a.end_t - a.start_t);
  }
  ASSERT_EQ(saved.size(), 3u);
  ASSERT_EQ(discarded.size(), 3u);
  EXPECT_NEAR(saved[0], 20.0, 1e-9);
  EXPECT_NEAR(saved[1], 4.0, 1e-9);
  EXPECT_NEAR(saved[2], 60.0, 1e-9);
  const auto s = d.dashboard_stats();
  double hand_sum = 0.0;
  for (double x : saved) hand_sum += x;
  for (double x : discarded) hand_sum += x;
  EXPECT_EQ(s.saved_count, 3u);
  EXPECT_EQ(s.discarded_count, 3u);
  EXPECT_EQ(s.total_recorded_s, s.saved_s + s.discarded_s);
  EXPECT_NEAR(s.total_recorded_s, hand_sum, 1e-9);
  EXPECT_NEAR(s.effective_interaction_s, 84.0, 1e-9);
  EXPECT_NEAR(s.storage_bytes, 84.0 * cfg.bytes_per_s, 1e-3);
}

TEST(Recorder, NoShortClipEverSaved) {
  std::mt19937_64 rng(112);
  std::uniform_real_distribution<double> start(0, 1000), len(0.1, 12), score(0, 1);
  DeviceConfig cfg;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<Interaction> in;
    for (int i = 0; i < 30; ++i) {
      const double s = start(rng);
      in.push_back({s, s + len(rng), score(rng)});
    }
    auto d = authorized(cfg);
    const auto acts = play(d, scripted_stream(in, 1000.0, 0.2, 0.2));
    for (const auto& c : d.gallery()) EXPECT_GE(c.duration(), cfg.min_duration_s);
    const auto s = d.dashboard_stats();
    EXPECT_EQ(s.total_recorded_s, s.saved_s + s.discarded_s);
  }
}

TEST(Review, RejectRemovesClipAndStorage) {
  auto d = authorized();
  play(d, scripted_stream({{0, 10, 0.9}}, 20.0, 0.1));
  const double before = d.dashboard_stats().storage_bytes;
  const auto id = d.gallery()[0].clip_id;
  EXPECT_EQ(d.review(id, ReviewDecision::reject()), nullptr);
  EXPECT_TRUE(d.gallery().empty());
  EXPECT_EQ(d.dashboard_stats().storage_bytes, 0.0);
  EXPECT_GT(before, 0.0);
  EXPECT_EQ(d.dashboard_stats().rejected_count, 1u);
}

TEST(Review, TrimUpdatesDuration) {
  auto d = authorized();
  play(d, scripted_stream({{0, 10, 0.9}}, 20.0, 0.1));
  const auto id = d.gallery()[0].clip_id;
  const auto* c = d.review(id, ReviewDecision::trim(2.0, 7.0));
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->duration(), 5.0);
  EXPECT_TRUE(c->approved);
  EXPECT_EQ(d.dashboard_stats().effective_interaction_s, 5.0);
  auto code = [&](double a, double b) {
    try {
      d.review(id, ReviewDecision::trim(a, b));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kParse;
  };
  EXPECT_EQ(code(-1.0, 5.0), ErrorCode::kBadTrimRange);
  EXPECT_EQ(code(4.0, 4.5), ErrorCode::kBadTrimRange);
}

TEST(Review, ApproveTwiceIsIdempotent) {
  auto d = authorized();
  play(d, scripted_stream({{0, 10, 0.9}}, 20.0, 0.1));
  const auto id = d.gallery()[0].clip_id;
  d.review(id, ReviewDecision::approve());
  const auto before = d.dashboard_stats();
  d.review(id, ReviewDecision::approve());
  EXPECT_EQ(d.dashboard_stats().storage_bytes, before.storage_bytes);
  EXPECT_EQ(d.gallery().size(), 1u);
  EXPECT_THROW(d.review("nope", ReviewDecision::approve()), Error);
}

TEST(Upload, OnlyApprovedClipsLeave) {
  auto d = authorized();
  play(d, scripted_stream({{0, 10, 0.9}, {20, 30, 0.9}, {40, 50, 0.9}, {60, 70, 0.9}, {80, 90, 0.9}}, 100.0, 0.1));
  ASSERT_EQ(d.gallery().size(), 5u);
  Recorder sink;
  EXPECT_THROW(d.batch_upload(sink, 100.0), Error);
  for (std::size_t i : {0u, 2u, 4u}) d.review(d.gallery()[i].clip_id, ReviewDecision::approve());
  const auto job = d.batch_upload(sink, 100.0);
  EXPECT_EQ(job.clip_ids.size(), 3u);
  ASSERT_EQ(sink.items.size(), 3u);
  for (const auto& item : sink.items) EXPECT_TRUE(d.find(item.clip_id)->approved);
  for (const auto& c : d.gallery()) EXPECT_EQ(c.state == ClipState::kUploading, c.approved);
}

TEST(Upload, LostAckRetriedIsDedupedDownstream) {
  auto sc = synth::gen_fleet_topology({3, "", 1, 1, 100.0, 1.0, 0.0});
  sc.workload.clear();
  sc.processing.enabled = false;
  auto d = authorized();
  play(d, scripted_stream({{0, 10, 0.9}, {20, 30, 0.9}, {40, 50, 0.9}, {60, 70, 0.9}}, 100.0, 0.1));
  for (std::size_t i = 0; i < 3; ++i) d.review(d.gallery()[i].clip_id, ReviewDecision::approve());
  FleetUploadAdapter adapter(sc, 0);
  d.batch_upload(adapter, 100.0);
  // The ack is lost: the clips stay UPLOADING and the next batch resends them.
  d.batch_upload(adapter, 200.0);
  EXPECT_EQ(adapter.submitted(), 6u);
  fleet::SimOptions o;
  o.drain = true;
  const auto res = fleet::run(sc, 300.0, o);
  EXPECT_EQ(res.central_store.size(), 3u);
  EXPECT_EQ(res.report.counts.duplicate_uploads, 3u);
  EXPECT_TRUE(res.report.consistent);
  EXPECT_EQ(ack_ingested(d, res), 3u);
  EXPECT_EQ(d.dashboard_stats().uploaded_count, 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(d.gallery()[i].state, ClipState::kUploaded);
  EXPECT_EQ(d.gallery()[3].state, ClipState::kLocalSaved);
  Recorder sink;
  EXPECT_THROW(d.batch_upload(sink, 400.0), Error);
}

TEST(Stats, FreshDeviceIsZero) {
  Device d("dev", {});
  const auto s = d.dashboard_stats();
  EXPECT_EQ(s.total_recorded_s, 0.0);
  EXPECT_EQ(s.saved_count + s.discarded_count + s.rejected_count + s.uploaded_count, 0u);
  EXPECT_EQ(s.storage_bytes, 0.0);
}

TEST(Config, Validation) {
  DeviceConfig c;
  c.release_threshold = 0.7;
  EXPECT_THROW(c.validate(), Error);
  EXPECT_THROW(Device("d", c), Error);
}
