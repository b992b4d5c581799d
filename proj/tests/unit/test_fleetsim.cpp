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
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "egocollect/error.hpp"
#include "egocollect/fleetsim.hpp"
#include "egocollect/io.hpp"
#include "egocollect/synth.hpp"
#include "oracles.hpp"

using namespace egocollect;
using namespace egocollect::fleet;

namespace {

FleetScenario tiny() {
  FleetScenario sc;
  sc.name = "tiny";
  sc.regions = {{"a", {0, 0}, 1000, true, 0}};
  sc.central_node = "a";
  sc.devices = {{"d0", {0, 1}}};
  sc.processing.enabled = false;
  return sc;
}

FleetScenario three_nodes() {
  FleetScenario sc;
  sc.name = "three";
  sc.regions = {{"a", {0, 0}, 1000, true, 0}, {"b", {0, 60}, 1000, true, 0}, {"c", {40, -100}, 1000, true, 0}};
  sc.central_node = "a";
  sc.devices = {{"d0", {1, 59}}, {"d1", {39, -101}}, {"d2", {0, 1}}};
  sc.workload = {{0, 300, 2.0}};
  sc.replication.interval_s = 30.0;
  sc.processing.enabled = false;
  sc.seed = 5;
  return sc;
}

void expect_conserved(const SimReport& r) {
  for (const auto& s : r.snapshots) {
    EXPECT_EQ(s.ingested, s.replicated + s.in_transit + s.node_resident) << "t=" << s.t_s;
  }
  EXPECT_EQ(r.counts.ingested, r.counts.replicated + r.counts.in_transit + r.counts.node_resident);
}

}  // namespace

TEST(Geo, HaversineAgreesWithCosineLaw) {
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> lat(-80, 80), lon(-179, 180);
  for (int i = 0; i < 200; ++i) {
    const GeoPoint a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)};
    EXPECT_NEAR(haversine_km(a, b), oracle::cosine_law_km(a.lat, a.lon, b.lat, b.lon), 1e-6);
  }
}

TEST(Geo, DestinationRoundTrip) {
  const GeoPoint o{-23.5, -46.6};
  for (double bearing : {0.0, 1.0, 2.5, 4.0}) {
    EXPECT_NEAR(haversine_km(o, destination(o, bearing, 321.0)), 321.0, 1e-6);
  }
}

TEST(Latency, SamePointIsBase) {
  LatencyModel m{0.05, 5.0, 0.0};
  Rng rng(1);
  EXPECT_EQ(latency(m, {10, 10}, {10, 10}, rng), 5.0);
}

TEST(Latency, Antipodal) {
  LatencyModel m{0.05, 5.0, 0.0};
  Rng rng(1);
  EXPECT_NEAR(latency(m, {0, 0}, {0, 180}, rng), 5.0 + 0.05 * M_PI * 6371.0, 1e-9);
  EXPECT_NEAR(latency(m, {0, 0}, {0, 180}, rng), 1005.7, 0.1);
}

TEST(Latency, SeededJitterRepeats) {
  LatencyModel m{0.05, 5.0, 0.2};
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(latency(m, {0, 0}, {10, 10}, a), latency(m, {0, 0}, {10, 10}, b));
}

TEST(Route, SingleNode) {
  const std::vector<RegionNode> nodes{{"only", {5, 5}, 1000, true, 0}};
  LatencyModel m;
  Rng rng(2);
  for (auto mode : {RoutingMode::kCentralized, RoutingMode::kGeoDns, RoutingMode::kGeoDnsPlusProbes}) {
    EXPECT_EQ(route({50, 50}, nodes, "only", m, mode, rng).node_id, "only");
  }
}

TEST(Route, ColocatedNodeWinsGeoModes) {
  const std::vector<RegionNode> nodes{{"a", {0, 0}, 1000, true, 0}, {"b", {40, 40}, 1000, true, 0}, {"c", {-40, 120}, 1000, true, 0}};
  LatencyModel m;
  Rng rng(3);
  EXPECT_EQ(route({0, 0}, nodes, "c", m, RoutingMode::kGeoDns, rng).node_id, "a");
  EXPECT_EQ(route({0, 0}, nodes, "c", m, RoutingMode::kGeoDnsPlusProbes, rng).node_id, "a");
  EXPECT_EQ(route({0, 0}, nodes, "c", m, RoutingMode::kCentralized, rng).node_id, "c");
}

TEST(Route, ProbesAvoidCongestedNearest) {
  const std::vector<RegionNode> nodes{{"near", {0, 0}, 1000, true, 500.0}, {"second", {0, 5}, 1000, true, 0}, {"far", {50, 100}, 1000, true, 0}};
  LatencyModel m;
  Rng rng(4);
  EXPECT_EQ(route({0, 1}, nodes, "far", m, RoutingMode::kGeoDns, rng).node_id, "near");
  const auto d = route({0, 1}, nodes, "far", m, RoutingMode::kGeoDnsPlusProbes, rng);
  EXPECT_EQ(d.node_id, "second");
  EXPECT_EQ(d.probes.size(), 3u);
}

TEST(Route, NoHealthyNode) {
  const std::vector<RegionNode> nodes{{"a", {0, 0}, 1000, false, 0}};
  LatencyModel m;
  Rng rng(5);
  try {
    route({0, 0}, nodes, "a", m, RoutingMode::kGeoDns, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoHealthyNode);
  }
}

TEST(Sim, SingleUpload) {
  auto sc = tiny();
  sc.uploads = {{1.0, 0, "clip-a"}};
  const auto res = run(sc, 10.0);
  EXPECT_EQ(res.report.counts.ingested, 1u);
  const auto& p = res.report.ingest_latency_ms.at(RoutingMode::kGeoDnsPlusProbes);
  EXPECT_EQ(p.count, 1u);
  EXPECT_NEAR(p.p50, 5.0 + 0.05 * haversine_km({0, 0}, {0, 1}), 1e-9);
  EXPECT_EQ(p.p50, p.max);
}

TEST(Sim, SameSeedBitIdentical) {
  const auto sc = three_nodes();
  EXPECT_EQ(io::report_json(run(sc, 300.0).report), io::report_json(run(sc, 300.0).report));
  auto other = sc;
  other.seed = 6;
  EXPECT_NE(io::report_json(run(sc, 300.0).report), io::report_json(run(other, 300.0).report));
}

TEST(Sim, ConservationAtEverySnapshot) {
  auto sc = three_nodes();
  sc.snapshot_interval_s = 7.0;
  inject_partition(sc, "b", 50.0, 100.0);
  const auto res = run(sc, 300.0);
  ASSERT_GT(res.report.snapshots.size(), 10u);
  expect_conserved(res.report);
}

TEST(Sim, ProbesPickMinimumOnEveryDecision) {
  auto sc = three_nodes();
  SimOptions o;
  o.record_routing = true;
  const auto res = run(sc, 300.0, o);
  ASSERT_FALSE(res.routing_trace.empty());
  for (const auto& d : res.routing_trace) {
    for (const auto& p : d.probes) EXPECT_LE(d.latency_ms, p.latency_ms);
  }
}

TEST(Sim, PerKmMonotone) {
  auto sc = three_nodes();
  sc.latency.jitter_sigma = 0.1;
  Percentiles prev{};
  for (double per_km : {0.0, 0.01, 0.05, 0.1}) {
    sc.latency.per_km_ms = per_km;
    for (const auto& [mode, p] : run(sc, 300.0).report.ingest_latency_ms) {
      (void)mode;
      EXPECT_GE(p.p50, 0.0);
    }
    const auto p = run(sc, 300.0).report.ingest_latency_ms.at(RoutingMode::kCentralized);
    EXPECT_GE(p.p50, prev.p50);
    EXPECT_GE(p.p95, prev.p95);
    EXPECT_GE(p.p99, prev.p99);
    EXPECT_GE(p.max, prev.max);
    prev = p;
  }
}

TEST(Replication, NoPartitionShipsEverything) {
  std::vector<std::string> unshipped{"a", "b", "c", "d", "e"};
  const auto out = replicate_tick(unshipped, {}, "n", 10.0);
  EXPECT_EQ(out.size(), 5u);
  EXPECT_TRUE(unshipped.empty());
}

TEST(Replication, PartitionDefersTick) {
  std::vector<std::string> unshipped{"a"};
  const std::vector<Partition> parts{{"n", 0.0, 100.0}};
  EXPECT_TRUE(replicate_tick(unshipped, parts, "n", 50.0).empty());
  EXPECT_EQ(unshipped.size(), 1u);
  EXPECT_TRUE(replicate_tick(unshipped, parts, "other", 50.0).size() == 1);
}

TEST(Replication, PartitionSpanningTwoTicks) {
  auto sc = tiny();
  sc.regions.push_back({"central", {0, 0}, 1000, true, 0});
  sc.central_node = "central";
  sc.latency = {0.0, 5.0, 0.0};
  sc.replication.interval_s = 10.0;
  sc.uploads = {{1.0, 0, "x"}};
  sc.routing = RoutingMode::kGeoDns;  // nearest is "a" (lexicographic tie)
  inject_partition(sc, "a", 5.0, 16.0);  // covers ticks at 10 and 20
  const auto res = run(sc, 60.0);
  ASSERT_EQ(res.report.replication_lag_s.count, 1u);
  // Ingest at 1 s + 5 ms + 1 ms service; shipped at 30 s, lands 5 ms later.
  const double ingest = 1.0 + 0.005 + 0.001;
  EXPECT_NEAR(res.report.replication_lag_s.p50, 30.005 - ingest, 1e-9);
  EXPECT_EQ(res.report.counts.deferred_batches, 2u);
}

TEST(Replication, DuplicateDeliveryIsIdempotent) {
  auto sc = three_nodes();
  sc.redeliveries = {{"b", 200.0}, {"c", 250.0}};
  SimOptions o;
  o.drain = true;
  const auto res = run(sc, 300.0, o);
  std::set<std::string> central(res.central_store.begin(), res.central_store.end());
  EXPECT_EQ(central.size(), res.central_store.size());
  EXPECT_GT(res.report.counts.duplicates_deduped, 0u);
  EXPECT_TRUE(res.report.consistent);
}

TEST(Partition, ZeroDurationHasNoEffect) {
  auto sc = three_nodes();
  const auto base = io::report_json(run(sc, 300.0).report);
  inject_partition(sc, "b", 100.0, 0.0);
  EXPECT_TRUE(sc.partitions.empty());
  EXPECT_EQ(io::report_json(run(sc, 300.0).report), base);
}

TEST(Partition, HealThenConsistent) {
  auto sc = three_nodes();
  inject_partition(sc, "b", 10.0, 200.0);
  inject_partition(sc, "c", 250.0, 100.0);
  SimOptions o;
  o.drain = true;
  const auto res = run(sc, 300.0, o);
  EXPECT_TRUE(res.report.consistent);
  std::set<std::string> uni;
  for (const auto& [n, ids] : res.node_stores) uni.insert(ids.begin(), ids.end());
  EXPECT_EQ(std::vector<std::string>(uni.begin(), uni.end()), res.central_store);
  expect_conserved(res.report);
}

TEST(Partition, PermanentLeavesResidue) {
  auto sc = three_nodes();
  inject_partition(sc, "b", 0.0, std::numeric_limits<double>::infinity());
  SimOptions o;
  o.drain = true;
  const auto res = run(sc, 300.0, o);
  EXPECT_FALSE(res.report.consistent);
  EXPECT_GT(res.report.unreplicated_residue, 0u);
  expect_conserved(res.report);
}

TEST(Partition, BadArguments) {
  auto sc = three_nodes();
  EXPECT_THROW(inject_partition(sc, "zz", 0, 1), Error);
  EXPECT_THROW(inject_partition(sc, "a", -1, 1), Error);
}

TEST(Scenario, Validation) {
  auto sc = tiny();
  EXPECT_THROW(sc.validate(), Error);  // no workload
  sc.uploads = {{0.0, 0, "x"}};
  EXPECT_NO_THROW(sc.validate());
  sc.central_node = "missing";
  EXPECT_THROW(sc.validate(), Error);
}

TEST(Autoscale, SimulatedSpikeRecovers) {
  auto sc = three_nodes();
  sc.workload = {{0, 300, 2.0}, {300, 900, 20.0}, {900, 1200, 2.0}};
  sc.processing = {true, 1.0, 0.3, 4, 30.0};
  const auto res = run(sc, 1200.0);
  ASSERT_TRUE(res.report.spike_recovery_s.has_value());
  EXPECT_LE(*res.report.spike_recovery_s, 180.0);
  int peak = 0;
  for (const auto& [t, w] : res.report.worker_series) {
    EXPECT_GE(w, sc.autoscaler.min_workers);
    EXPECT_LE(w, sc.autoscaler.max_workers);
    peak = std::max(peak, w);
  }
  EXPECT_GT(peak, sc.processing.initial_workers);
  const auto& ev = res.report.autoscale_events;
  for (std::size_t i = 1; i < ev.size(); ++i) EXPECT_GE(ev[i].t_s - ev[i - 1].t_s, sc.autoscaler.cooldown_s);
}
