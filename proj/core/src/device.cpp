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

#include "egocollect/device.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "egocollect/error.hpp"

namespace egocollect::device {

void DeviceConfig::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(trigger_threshold) || !in_unit(release_threshold)) {
    throw Error(ErrorCode::kInvalidArgument, "thresholds must be in [0, 1]");
  }
  if (release_threshold > trigger_threshold) {
    throw Error(ErrorCode::kInvalidArgument, "release threshold must not exceed trigger threshold");
  }
  if (!(release_hold_s >= 0.0) || !(min_duration_s >= 0.0) || !(bytes_per_s >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "hold, min duration and bytes_per_s must be >= 0");
  }
}

namespace {

void close_recording(RecorderState& s, double end_t, double now, const DeviceConfig& config,
                     std::vector<Action>& actions) {
  const double duration = end_t - s.recording_start;
  const auto kind = duration < config.min_duration_s ? ActionKind::kDiscardClip : ActionKind::kSaveClip;
  actions.push_back({kind, now, s.recordings, s.recording_start, end_t});
  s.below_since.reset();
}

}  // namespace

StepResult step(const RecorderState& state, const DetectorEvent& ev, const DeviceConfig& config) {
  if (!std::isfinite(ev.t)) throw Error(ErrorCode::kInvalidArgument, "event time is not finite");
  if (state.last_t && ev.t < *state.last_t) {
    throw Error(ErrorCode::kOutOfOrderEvent, "event at t=" + std::to_string(ev.t) +
                                                 " after t=" + std::to_string(*state.last_t));
  }
  StepResult r{state, {}};
  auto& s = r.state;
  s.last_t = ev.t;
  switch (s.mode) {
    case Mode::kUnauthorized:
      ++s.dropped_events;
      break;
    case Mode::kMonitoring:
      if (ev.hand_present && ev.interaction_score >= config.trigger_threshold) {
        s.mode = Mode::kRecording;
        ++s.recordings;
        s.recording_start = ev.t;
        s.below_since.reset();
        r.actions.push_back({ActionKind::kStartRecording, ev.t, s.recordings, ev.t, ev.t});
      }
      break;
    case Mode::kRecording: {
      const bool releasing = !ev.hand_present || ev.interaction_score < config.release_threshold;
      if (!releasing) {
        s.below_since.reset();
        break;
      }
      if (!s.below_since) s.below_since = ev.t;
      if (ev.t - *s.below_since >= config.release_hold_s) {
        close_recording(s, *s.below_since, ev.t, config, r.actions);
        s.mode = Mode::kMonitoring;
      }
      break;
    }
  }
  return r;
}

Device::Device(std::string device_id, DeviceConfig config, geometry::CameraIntrinsics intrinsics,
               std::map<std::string, std::string> sensor_metadata)
    : id_(std::move(device_id)),
      config_(config),
      intrinsics_(intrinsics),
      metadata_(std::move(sensor_metadata)) {
  config_.validate();
}

void Device::authorize() {
  if (state_.mode == Mode::kUnauthorized) state_.mode = Mode::kMonitoring;
}

std::vector<Action> Device::revoke(double t) {
  auto actions = flush(t);
  state_.mode = Mode::kUnauthorized;
  return actions;
}

std::vector<Action> Device::on_event(const DetectorEvent& ev) {
  auto r = step(state_, ev, config_);
  state_ = r.state;
  apply(r.actions);
  return r.actions;
}

std::vector<Action> Device::flush(double t) {
  std::vector<Action> actions;
  if (state_.mode != Mode::kRecording) return actions;
  if (state_.last_t && t < *state_.last_t) {
    throw Error(ErrorCode::kOutOfOrderEvent, "flush before the last event");
  }
  const double end_t = state_.below_since.value_or(t);
  close_recording(state_, end_t, t, config_, actions);
  state_.mode = Mode::kMonitoring;
  state_.last_t = t;
  apply(actions);
  return actions;
}

std::string Device::clip_id_for(std::uint64_t recording) const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "-rec%05llu", static_cast<unsigned long long>(recording));
  return id_ + buf;
}

void Device::apply(const std::vector<Action>& actions) {
  for (const auto& a : actions) {
    const double duration = a.end_t - a.start_t;
    if (a.kind == ActionKind::kDiscardClip) {
      ++stats_.discarded_count;
      stats_.discarded_s += duration;
    } else if (a.kind == ActionKind::kSaveClip) {
      LocalClip c;
      c.clip_id = clip_id_for(a.recording);
      c.start_t = c.trim_start = a.start_t;
      c.end_t = c.trim_end = a.end_t;
      c.intrinsics = intrinsics_;
      c.metadata = metadata_;
      c.metadata["device_id"] = id_;
      gallery_.push_back(std::move(c));
      ++stats_.saved_count;
      stats_.saved_s += duration;
      stats_.storage_bytes += duration * config_.bytes_per_s;
    }
  }
}

const LocalClip* Device::find(const std::string& clip_id) const {
  for (const auto& c : gallery_) {
    if (c.clip_id == clip_id) return &c;
  }
  return nullptr;
}

const LocalClip* Device::review(const std::string& clip_id, const ReviewDecision& decision) {
  auto it = std::find_if(gallery_.begin(), gallery_.end(), [&](const LocalClip& c) { return c.clip_id == clip_id; });
  if (it == gallery_.end()) throw Error(ErrorCode::kInvalidArgument, "no clip '" + clip_id + "' in the gallery");
  if (it->state == ClipState::kUploading || it->state == ClipState::kUploaded) {
    throw Error(ErrorCode::kInvalidArgument, "clip '" + clip_id + "' is already being uploaded");
  }
  switch (decision.kind) {
    case ReviewKind::kApprove:
      break;
    case ReviewKind::kReject:
      stats_.storage_bytes -= it->duration() * config_.bytes_per_s;
      ++stats_.rejected_count;
      gallery_.erase(it);
      return nullptr;
    case ReviewKind::kTrim: {
      const double a = decision.trim_start, b = decision.trim_end;
      if (!(a >= it->start_t && b <= it->end_t && a < b)) {
        throw Error(ErrorCode::kBadTrimRange, "trim range outside clip '" + clip_id + "'");
      }
      if (b - a < config_.min_duration_s) {
        throw Error(ErrorCode::kBadTrimRange, "trimmed clip would be shorter than the minimum duration");
      }
      stats_.storage_bytes -= (it->duration() - (b - a)) * config_.bytes_per_s;
      it->trim_start = a;
      it->trim_end = b;
      break;
    }
  }
  it->approved = true;
  it->state = ClipState::kAuthorized;
  return &*it;
}

UploadJob Device::batch_upload(UploadSink& sink, double now_s) {
  UploadJob job;
  job.job_id = ++jobs_;
  job.t_s = now_s;
  for (auto& c : gallery_) {
    // Unacked clips from an earlier job are sent again; the fleet dedups by id.
    if (!c.approved) continue;
    if (c.state != ClipState::kAuthorized && c.state != ClipState::kUploading) continue;
    job.clip_ids.push_back(c.clip_id);
  }
  if (job.clip_ids.empty()) {
    --jobs_;
    throw Error(ErrorCode::kNothingApproved, "no approved clip awaiting upload on " + id_);
  }
  for (auto& c : gallery_) {
    if (std::find(job.clip_ids.begin(), job.clip_ids.end(), c.clip_id) == job.clip_ids.end()) continue;
    c.state = ClipState::kUploading;
    UploadItem item{c.clip_id, id_, now_s, c.duration(), c.intrinsics, c.metadata};
    item.metadata["trim_start"] = std::to_string(c.trim_start);
    item.metadata["trim_end"] = std::to_string(c.trim_end);
    item.metadata["deidentified"] = "1";
    sink.submit(item);
  }
  return job;
}

bool Device::ack(const std::string& clip_id) {
  for (auto& c : gallery_) {
    if (c.clip_id != clip_id) continue;
    if (c.state != ClipState::kUploading) return false;
    c.state = ClipState::kUploaded;
    ++stats_.uploaded_count;
    return true;
  }
  return false;
}

DashboardStats Device::dashboard_stats() const {
  DashboardStats s = stats_;
  // Derived rather than accumulated so the identity holds bit for bit.
  s.total_recorded_s = s.saved_s + s.discarded_s;
  s.dropped_events = state_.dropped_events;
  s.effective_interaction_s = 0.0;
  for (const auto& c : gallery_) s.effective_interaction_s += c.duration();
  return s;
}

std::vector<DetectorEvent> scripted_stream(const std::vector<Interaction>& interactions, double total_s,
                                           double spacing_s, double idle_score) {
  if (!(spacing_s > 0.0) || !(total_s >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "spacing must be > 0 and total >= 0");
  }
  std::vector<DetectorEvent> out;
  const auto n = static_cast<std::size_t>(std::floor(total_s / spacing_s + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) * spacing_s;
    DetectorEvent ev{t, false, idle_score};
    for (const auto& in : interactions) {
      if (t >= in.start_s && t < in.end_s) {
        ev.hand_present = true;
        ev.interaction_score = in.score;
      }
    }
    out.push_back(ev);
  }
  return out;
}

FleetUploadAdapter::FleetUploadAdapter(fleet::FleetScenario& scenario, std::size_t device_index)
    : scenario_(scenario), device_index_(device_index) {
  if (device_index >= scenario.devices.size()) {
    throw Error(ErrorCode::kInvalidArgument, "device index outside the scenario");
  }
}

void FleetUploadAdapter::submit(const UploadItem& item) {
  scenario_.uploads.push_back({item.t_s, device_index_, item.clip_id});
  ++submitted_;
}

std::size_t ack_ingested(Device& device, const fleet::SimResult& result) {
  std::size_t n = 0;
  for (const auto& c : device.gallery()) {
    if (c.state == ClipState::kUploading && result.ingest_time_s.count(c.clip_id)) {
      n += device.ack(c.clip_id) ? 1 : 0;
    }
  }
  return n;
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kUnauthorized: return "UNAUTHORIZED";
    case Mode::kMonitoring: return "MONITORING";
    case Mode::kRecording: return "RECORDING";
  }
  return "?";
}

std::string_view to_string(ClipState state) {
  switch (state) {
    case ClipState::kLocalSaved: return "LOCAL_SAVED";
    case ClipState::kAuthorized: return "AUTHORIZED";
    case ClipState::kUploading: return "UPLOADING";
    case ClipState::kUploaded: return "UPLOADED";
  }
  return "?";
}

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::kStartRecording: return "START_RECORDING";
    case ActionKind::kSaveClip: return "SAVE_CLIP";
    case ActionKind::kDiscardClip: return "DISCARD_CLIP";
  }
  return "?";
}

}  // namespace egocollect::device
