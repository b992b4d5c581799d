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

#include <any>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "egocollect/qc.hpp"
#include "egocollect/stats.hpp"
#include "egocollect/worker_pool.hpp"

namespace egocollect::pipeline {

struct SemVer {
  int major = 0, minor = 0, patch = 0;
  std::string prerelease;  // empty for a release; a release outranks its prereleases

  /// Accepts "1", "1.2", "1.2.3", an optional leading 'v' and "-pre". Throws InvalidArgument.
  static SemVer parse(std::string_view text);
  std::string str() const;

  friend bool operator==(const SemVer&, const SemVer&) = default;
  friend std::strong_ordering operator<=>(const SemVer& a, const SemVer& b);
};

struct LineageEntry {
  std::string op;
  std::string version;
  std::string stage_id;
  double dispatched_at = 0.0;
  double completed_at = 0.0;
};

struct ClipArtifact {
  std::string clip_id;
  std::string root_id;  // input this artifact descends from; set by the engine if empty
  std::string kind;
  std::any payload;
  std::map<std::string, std::string> tags;
  std::vector<LineageEntry> lineage;
};

struct OpContext {
  std::string stage_id;
  std::string version;
  double now_s = 0.0;
  std::uint64_t seed = 0;
};

struct OpResult {
  std::vector<ClipArtifact> outputs;
  std::optional<qc::QCVerdict> rejected;  // routes the item to the hard-negative pool
  std::optional<std::string> error;

  static OpResult emit(ClipArtifact a);
  static OpResult reject(qc::QCVerdict v);
  static OpResult fail(std::string message);
};

using OperatorFn = std::function<OpResult(const ClipArtifact&, const OpContext&)>;

struct OperatorSpec {
  std::string name;
  std::string version;
  ResourceClass resource_class = ResourceClass::kCpu;
  std::string input_kind;
  std::string output_kind;
  double mean_service_s = 1.0;
  double dispersion = 0.0;  // log-normal sigma; the mean is preserved

  void validate() const;
};

struct RegisteredOperator {
  OperatorSpec spec;
  SemVer semver;
  OperatorFn fn;
};

/// Versioned operators. Unpinned stages resolve to the active override set by
/// a hot swap, otherwise to the highest registered version at lookup time.
class OperatorRegistry {
 public:
  /// Throws DuplicateVersion, InvalidArgument.
  void register_operator(OperatorSpec spec, OperatorFn fn);

  bool has(std::string_view name) const;
  bool has(std::string_view name, std::string_view version) const;
  /// Sorted ascending.
  std::vector<std::string> versions(std::string_view name) const;

  /// Throws UnknownOperator, UnknownVersion.
  const RegisteredOperator& resolve(std::string_view name,
                                    const std::optional<std::string>& pinned = std::nullopt) const;

  void set_active(const std::string& name, const std::string& version);
  std::optional<std::string> active_override(std::string_view name) const;

 private:
  const RegisteredOperator* find(std::string_view name, const SemVer& v) const;

  std::map<std::string, std::vector<RegisteredOperator>, std::less<>> ops_;  // sorted by semver
  std::map<std::string, SemVer, std::less<>> overrides_;
};

struct StageSpec {
  std::string id;
  std::string op;
  std::optional<std::string> version;  // pinned when set
};

struct PipelineSpec {
  std::vector<StageSpec> stages;
  std::vector<std::pair<std::string, std::string>> edges;
  int retries = 0;  // per item and stage, before the error bin
};

enum class SpecErrorKind {
  kEmpty,
  kDuplicateStage,
  kDanglingEdge,
  kSelfLoop,
  kCycle,
  kUnknownOperator,
  kUnknownVersion,
  kKindMismatch,
  kNoSource,
  kNoSink,
  kBadRetries,
};

struct SpecError {
  SpecErrorKind kind;
  std::vector<std::string> stages;
  std::string message;
};

/// Never throws; an empty result means the spec is executable.
std::vector<SpecError> validate_spec(const PipelineSpec& spec, const OperatorRegistry& registry);

/// Stage ids in Kahn order, ties broken by declaration order. Requires a DAG.
std::vector<std::string> topological_order(const PipelineSpec& spec);

struct SwapReceipt {
  std::string op;
  std::string old_version;
  std::string new_version;
  double swap_time = 0.0;
  std::size_t in_flight_count = 0;  // items executing under the old version at swap_time
  bool noop = false;
};

struct DispatchRecord {
  double t = 0.0;
  std::string stage_id;
  std::string op;
  std::string version;
  ResourceClass pool = ResourceClass::kCpu;
  int worker = 0;
  std::string clip_id;
};

struct ErrorRecord {
  std::string root_id;
  std::string clip_id;
  std::string stage_id;
  std::string op;
  std::string version;
  std::string message;
};

struct StageReport {
  std::size_t dispatched = 0;
  std::size_t completed = 0;
  Percentiles latency_s;  // enqueue to completion
  std::map<std::string, std::size_t> version_counts;
  std::vector<std::size_t> queue_depth;  // sampled at RunReport::series_t
};

struct RootCounts {
  std::size_t inputs = 0;
  std::size_t sink = 0;
  std::size_t pool = 0;
  std::size_t error = 0;
  std::size_t in_flight = 0;  // only non-zero when a run stops at a horizon
};

struct RunReport {
  std::vector<double> series_t;
  std::map<std::string, StageReport> stages;
  Percentiles end_to_end_s;
  double makespan_s = 0.0;
  double throughput_per_s = 0.0;  // sink outputs per simulated second
  std::size_t sink_outputs = 0;
  RootCounts roots;  // each input counted once; error beats pool beats sink
  std::map<ResourceClass, double> utilization;
  std::vector<SwapReceipt> swaps;
};

struct RunResult {
  RunReport report;
  std::vector<ClipArtifact> outputs;
  qc::HardNegativePool hard_negatives;
  std::vector<ErrorRecord> error_bin;
  std::vector<DispatchRecord> trace;
};

struct EngineConfig {
  int cpu_workers = 8;
  int gpu_workers = 2;
  std::uint64_t seed = 0;
  double sample_tick_s = 1.0;
  double arrival_interval_s = 0.0;  // input i arrives at i * interval
  bool record_trace = true;
};

/// Single scheduler over a simulated clock. At equal times control events
/// (hot swaps) run first, then completions, then arrivals; dispatch happens
/// after every batch of simultaneous events.
class Engine {
 public:
  Engine(OperatorRegistry& registry, EngineConfig config);
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  /// Throws InvalidSpec (message lists validate_spec errors).
  void start(const PipelineSpec& spec, std::vector<ClipArtifact> inputs);
  /// Processes every event with time <= t_s.
  void advance_until(double t_s);
  /// Runs until quiescent or until stop_at, then returns the result.
  RunResult finish(std::optional<double> stop_at = std::nullopt);

  /// Immediate swap at the current simulated time. Throws UnknownOperator,
  /// UnknownVersion, IncompatibleVersion.
  SwapReceipt hot_swap(const std::string& op, const std::string& version);
  /// Swap as a control event at t_s; its receipt lands in the report.
  void schedule_hot_swap(double t_s, const std::string& op, const std::string& version);

  double now() const;
  bool running() const;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

/// start + finish in one call.
RunResult run(OperatorRegistry& registry, const PipelineSpec& spec, std::vector<ClipArtifact> inputs,
              const EngineConfig& config = {});

std::string_view to_string(SpecErrorKind kind);

}  // namespace egocollect::pipeline
