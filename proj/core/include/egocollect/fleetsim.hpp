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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "egocollect/autoscaler.hpp"
#include "egocollect/stats.hpp"

namespace egocollect::fleet {

inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, (-180, 180]

  void validate() const;
};

double haversine_km(const GeoPoint& a, const GeoPoint& b);
/// Point reached by travelling distance_km along the great circle with the given bearing.
GeoPoint destination(const GeoPoint& origin, double bearing_rad, double distance_km);

using Rng = std::mt19937_64;

struct LatencyModel {
  double per_km_ms = 0.05;
  double base_ms = 5.0;
  // Log-space sigma of the multiplicative log-normal jitter (median 1); 0 disables it.
  double jitter_sigma = 0.0;
};

double nominal_latency_ms(const LatencyModel& model, const GeoPoint& a, const GeoPoint& b);

/// (base + per_km * haversine) * exp(jitter_sigma * z). Always consumes one
/// normal draw so RNG streams stay aligned when parameters change.
double latency(const LatencyModel& model, const GeoPoint& a, const GeoPoint& b, Rng& rng);

struct RegionNode {
  std::string node_id;
  GeoPoint location;
  double ingest_capacity = 1000.0;  // items per simulated second
  bool healthy = true;
  double probe_penalty_ms = 0.0;    // congestion seen by uploads and probes
};

enum class RoutingMode { kCentralized, kGeoDns, kGeoDnsPlusProbes };

inline constexpr std::size_t kProbeCandidates = 3;

struct Probe {
  std::string node_id;
  double latency_ms = 0.0;
};

struct RoutingDecision {
  std::size_t node_index = 0;
  std::string node_id;
  double latency_ms = 0.0;     // upload latency experienced on the chosen link
  std::vector<Probe> probes;   // only for kGeoDnsPlusProbes
};

/// CENTRALIZED sends to central_node; GEO_DNS picks the nearest healthy node by
/// great-circle distance; GEO_DNS_PLUS_PROBES probes the 3 nearest healthy
/// nodes once and takes the minimum. Ties break on lexicographic node_id.
/// Throws NoHealthyNode.
RoutingDecision route(const GeoPoint& device, std::span<const RegionNode> nodes,
                      std::string_view central_node, const LatencyModel& model, RoutingMode mode,
                      Rng& rng);

struct ReplicationPolicy {
  double interval_s = 3600.0;
};

struct Partition {
  std::string node_id;  // link (node_id, central) is cut
  double start_s = 0.0;
  double duration_s = 0.0;  // infinity for a permanent partition

  bool covers(double t_s) const { return t_s >= start_s && t_s < start_s + duration_s; }
};

struct WorkloadSegment {
  double start_s = 0.0;
  double end_s = 0.0;
  double rate_per_s = 0.0;  // fleet-wide Poisson upload rate
};

struct DeviceSpec {
  std::string device_id;
  GeoPoint location;
};

struct ExplicitUpload {
  double t_s = 0.0;
  std::size_t device = 0;
  std::string clip_id;
};

struct Redelivery {
  std::string node_id;
  double at_s = 0.0;
};

// Annotation workers fed by every ingested clip; scaled by the autoscaler.
struct ProcessingTier {
  bool enabled = true;
  double mean_service_s = 1.0;
  double dispersion = 0.0;  // log-normal sigma around the mean; 0 is deterministic
  int initial_workers = 4;
  double metrics_window_s = 30.0;
};

struct FleetScenario {
  std::string name = "custom";
  std::vector<RegionNode> regions;
  std::string central_node;
  std::vector<DeviceSpec> devices;
  LatencyModel latency;
  std::vector<WorkloadSegment> workload;
  std::vector<ExplicitUpload> uploads;
  std::vector<Partition> partitions;
  std::vector<Redelivery> redeliveries;
  ReplicationPolicy replication;
  AutoscalerPolicy autoscaler;
  ProcessingTier processing;
  RoutingMode routing = RoutingMode::kGeoDnsPlusProbes;
  std::uint64_t seed = 0;
  double snapshot_interval_s = 60.0;

  /// Throws InvalidScenario.
  void validate() const;
  std::size_t node_index(std::string_view node_id) const;
};

/// Adds a partition of the (node, central) link. Overlapping partitions are
/// allowed and behave as their union; a zero-length partition has no effect.
void inject_partition(FleetScenario& scenario, const std::string& node_id, double start_s,
                      double duration_s);

using egocollect::Percentiles;
using egocollect::summarize;

struct Snapshot {
  double t_s = 0.0;
  std::size_t uploads_sent = 0;
  std::size_t upload_in_flight = 0;
  std::size_t ingested = 0;
  std::size_t replicated = 0;
  std::size_t in_transit = 0;
  std::size_t node_resident = 0;
};

struct Counts {
  std::size_t uploads_sent = 0;
  std::size_t ingested = 0;            // unique clip ids stored at edge nodes
  std::size_t duplicate_uploads = 0;   // re-uploads of an id already stored at the node
  std::size_t replicated = 0;          // unique ids in the central store
  std::size_t in_transit = 0;
  std::size_t node_resident = 0;       // ingested, not yet shipped
  std::size_t duplicates_deduped = 0;  // central re-deliveries ignored
  std::size_t deferred_batches = 0;    // replication ticks blocked by a partition
  std::size_t processed = 0;
};

struct AutoscaleEvent {
  double t_s = 0.0;
  ScaleAction action = ScaleAction::kHold;
  int count = 0;
  int workers_after = 0;
};

struct SimReport {
  std::string scenario;
  RoutingMode routing = RoutingMode::kGeoDnsPlusProbes;
  std::uint64_t seed = 0;
  double duration_s = 0.0;
  double end_time_s = 0.0;
  // Every mode is evaluated on the same upload stream; `routing` drives delivery.
  std::map<RoutingMode, Percentiles> ingest_latency_ms;
  Percentiles node_queue_wait_ms;
  Percentiles replication_lag_s;
  Percentiles processing_latency_s;
  std::vector<std::pair<double, int>> worker_series;
  std::vector<std::pair<double, double>> processing_p95_series_ms;
  std::vector<AutoscaleEvent> autoscale_events;
  std::optional<double> spike_recovery_s;
  Counts counts;
  std::vector<Snapshot> snapshots;
  bool consistent = false;  // central store equals the union of node stores
  std::size_t unreplicated_residue = 0;
};

struct SimOptions {
  // Keep replicating past duration until quiescent, then one more interval.
  bool drain = false;
  bool record_routing = false;
};

struct SimResult {
  SimReport report;
  std::map<std::string, std::vector<std::string>> node_stores;  // sorted ids per node
  std::vector<std::string> central_store;                        // sorted ids
  std::vector<RoutingDecision> routing_trace;
  std::map<std::string, double> ingest_time_s;  // clip id -> first edge receipt
};

/// Deterministic discrete-event run; total event order is (time in integer
/// microseconds, insertion sequence).
SimResult run(const FleetScenario& scenario, double duration_s, const SimOptions& options = {});

/// Ships every unshipped id of one node unless the (node, central) link is
/// partitioned at now_s. Returns the ids handed to the network.
std::vector<std::string> replicate_tick(std::vector<std::string>& unshipped,
                                        std::span<const Partition> partitions,
                                        std::string_view node_id, double now_s);

std::string_view to_string(RoutingMode mode);
RoutingMode routing_mode_from_string(std::string_view s);

}  // namespace egocollect::fleet
