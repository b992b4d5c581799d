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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "egocollect/fleetsim.hpp"
#include "egocollect/geometry.hpp"

namespace egocollect::device {

struct DeviceConfig {
  double trigger_threshold = 0.6;
  double release_threshold = 0.4;
  double release_hold_s = 1.0;
  double min_duration_s = 3.0;
  double bytes_per_s = 2.5e6;  // local storage per recorded second

  void validate() const;
};

struct DetectorEvent {
  double t = 0.0;
  bool hand_present = false;
  double interaction_score = 0.0;  // [0, 1]
};

enum class Mode { kUnauthorized, kMonitoring, kRecording };
enum class ClipState { kLocalSaved, kAuthorized, kUploading, kUploaded };

enum class ActionKind { kStartRecording, kSaveClip, kDiscardClip };

struct Action {
  ActionKind kind = ActionKind::kStartRecording;
  double t = 0.0;
  std::uint64_t recording = 0;  // sequence number of the recording
  double start_t = 0.0;
  double end_t = 0.0;
};

/// Everything the trigger logic depends on; copyable so that a replay can be
/// compared bit for bit.
struct RecorderState {
  Mode mode = Mode::kUnauthorized;
  std::optional<double> last_t;
  double recording_start = 0.0;
  std::optional<double> below_since;  // first time the release condition held
  std::uint64_t recordings = 0;
  std::uint64_t dropped_events = 0;   // events seen while unauthorized

  friend bool operator==(const RecorderState&, const RecorderState&) = default;
};

struct StepResult {
  RecorderState state;
  std::vector<Action> actions;
};

/// Pure transition. MONITORING -> RECORDING when hand_present and score >=
/// trigger. While recording, the release condition is !hand_present or score
/// < release; once it has held for release_hold_s the clip ends at the time
/// it first held. Clips shorter than min_duration_s are discarded.
/// Throws OutOfOrderEvent when t decreases.
StepResult step(const RecorderState& state, const DetectorEvent& ev, const DeviceConfig& config);

struct LocalClip {
  std::string clip_id;
  double start_t = 0.0;
  double end_t = 0.0;
  double trim_start = 0.0;
  double trim_end = 0.0;
  bool approved = false;
  ClipState state = ClipState::kLocalSaved;
  geometry::CameraIntrinsics intrinsics;
  std::map<std::string, std::string> metadata;

  double duration() const { return trim_end - trim_start; }
};

enum class ReviewKind { kApprove, kReject, kTrim };

struct ReviewDecision {
  ReviewKind kind = ReviewKind::kApprove;
  double trim_start = 0.0;
  double trim_end = 0.0;

  static ReviewDecision approve() { return {ReviewKind::kApprove, 0, 0}; }
  static ReviewDecision reject() { return {ReviewKind::kReject, 0, 0}; }
  static ReviewDecision trim(double a, double b) { return {ReviewKind::kTrim, a, b}; }
};

struct UploadItem {
  std::string clip_id;
  std::string device_id;
  double t_s = 0.0;
  double duration_s = 0.0;
  geometry::CameraIntrinsics intrinsics;
  std::map<std::string, std::string> metadata;
};

class UploadSink {
 public:
  virtual ~UploadSink() = default;
  virtual void submit(const UploadItem& item) = 0;
};

struct UploadJob {
  std::uint64_t job_id = 0;
  double t_s = 0.0;
  std::vector<std::string> clip_ids;
};

struct DashboardStats {
  double total_recorded_s = 0.0;        // saved + discarded, at recording time
  double saved_s = 0.0;
  double discarded_s = 0.0;
  double effective_interaction_s = 0.0;  // post-trim duration of clips still held
  std::size_t saved_count = 0;
  std::size_t discarded_count = 0;
  std::size_t rejected_count = 0;
  std::size_t uploaded_count = 0;
  std::uint64_t dropped_events = 0;
  double storage_bytes = 0.0;
};

class Device {
 public:
  Device(std::string device_id, DeviceConfig config, geometry::CameraIntrinsics intrinsics = {},
         std::map<std::string, std::string> sensor_metadata = {});

  void authorize();
  /// Stops an active recording at t (same rules as a release) and returns to UNAUTHORIZED.
  std::vector<Action> revoke(double t);

  std::vector<Action> on_event(const DetectorEvent& ev);
  /// Ends the session at t: an active recording is closed as if released.
  std::vector<Action> flush(double t);

  /// Throws InvalidArgument for unknown or already uploading clips, BadTrimRange.
  const LocalClip* review(const std::string& clip_id, const ReviewDecision& decision);

  /// Sends every approved clip that has not been acknowledged. Throws NothingApproved.
  UploadJob batch_upload(UploadSink& sink, double now_s);
  /// Marks an uploading clip as uploaded; repeated acks are ignored.
  bool ack(const std::string& clip_id);

  DashboardStats dashboard_stats() const;

  const std::string& id() const { return id_; }
  Mode mode() const { return state_.mode; }
  const RecorderState& recorder() const { return state_; }
  const DeviceConfig& config() const { return config_; }
  /// Gallery in recording order; rejected clips are gone.
  const std::vector<LocalClip>& gallery() const { return gallery_; }
  const LocalClip* find(const std::string& clip_id) const;

 private:
  void apply(const std::vector<Action>& actions);
  std::string clip_id_for(std::uint64_t recording) const;

  std::string id_;
  DeviceConfig config_;
  geometry::CameraIntrinsics intrinsics_;
  std::map<std::string, std::string> metadata_;
  RecorderState state_;
  std::vector<LocalClip> gallery_;
  DashboardStats stats_;
  std::uint64_t jobs_ = 0;
};

struct Interaction {
  double start_s = 0.0;
  double end_s = 0.0;
  double score = 0.9;
};

/// Scripted detector stream sampled every spacing_s over [0, total_s]: the
/// score is the interaction's score inside an interval and idle_score outside.
std::vector<DetectorEvent> scripted_stream(const std::vector<Interaction>& interactions, double total_s,
                                           double spacing_s, double idle_score = 0.1);

/// Collects device uploads as explicit fleetsim uploads from one device.
class FleetUploadAdapter : public UploadSink {
 public:
  FleetUploadAdapter(fleet::FleetScenario& scenario, std::size_t device_index);
  void submit(const UploadItem& item) override;
  std::size_t submitted() const { return submitted_; }

 private:
  fleet::FleetScenario& scenario_;
  std::size_t device_index_;
  std::size_t submitted_ = 0;
};

/// Acks every uploading clip of the device that reached an edge node in the run.
std::size_t ack_ingested(Device& device, const fleet::SimResult& result);

std::string_view to_string(Mode mode);
std::string_view to_string(ClipState state);
std::string_view to_string(ActionKind kind);

}  // namespace egocollect::device
