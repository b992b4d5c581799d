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

#include "egocollect/fleetsim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <queue>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "egocollect/error.hpp"

namespace egocollect::fleet {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double lognormal_factor(double sigma, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double z = normal(rng);
  return sigma > 0.0 ? std::exp(sigma * z) : 1.0;
}

}  // namespace

void GeoPoint::validate() const {
  if (!(lat >= -90.0 && lat <= 90.0) || !(lon > -180.0 && lon <= 180.0)) {
    throw Error(ErrorCode::kInvalidArgument, "geo point out of range");
  }
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double h = std::sin(dphi / 2) * std::sin(dphi / 2) +
                   std::cos(phi1) * std::cos(phi2) * std::sin(dlambda / 2) * std::sin(dlambda / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

GeoPoint destination(const GeoPoint& origin, double bearing_rad, double distance_km) {
  const double delta = distance_km / kEarthRadiusKm;
  const double phi1 = origin.lat * kDegToRad;
  const double lambda1 = origin.lon * kDegToRad;
  const double phi2 = std::asin(std::sin(phi1) * std::cos(delta) +
                                std::cos(phi1) * std::sin(delta) * std::cos(bearing_rad));
  const double lambda2 =
      lambda1 + std::atan2(std::sin(bearing_rad) * std::sin(delta) * std::cos(phi1),
                           std::cos(delta) - std::sin(phi1) * std::sin(phi2));
  double lon = lambda2 / kDegToRad;
  lon = std::fmod(lon + 540.0, 360.0) - 180.0;
  if (lon <= -180.0) lon += 360.0;
  return {phi2 / kDegToRad, lon};
}

double nominal_latency_ms(const LatencyModel& model, const GeoPoint& a, const GeoPoint& b) {
  return model.base_ms + model.per_km_ms * haversine_km(a, b);
}

double latency(const LatencyModel& model, const GeoPoint& a, const GeoPoint& b, Rng& rng) {
  return nominal_latency_ms(model, a, b) * lognormal_factor(model.jitter_sigma, rng);
}

RoutingDecision route(const GeoPoint& device, std::span<const RegionNode> nodes,
                      std::string_view central_node, const LatencyModel& model, RoutingMode mode,
                      Rng& rng) {
  RoutingDecision out;
  if (mode == RoutingMode::kCentralized) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].node_id == central_node && nodes[i].healthy) {
        out.node_index = i;
        out.node_id = nodes[i].node_id;
        out.latency_ms = latency(model, device, nodes[i].location, rng) + nodes[i].probe_penalty_ms;
        return out;
      }
    }
    throw Error(ErrorCode::kNoHealthyNode, "central node unavailable");
  }

  std::vector<std::tuple<double, std::string_view, std::size_t>> ranked;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].healthy) ranked.emplace_back(haversine_km(device, nodes[i].location), nodes[i].node_id, i);
  }
  if (ranked.empty()) throw Error(ErrorCode::kNoHealthyNode, "no healthy ingestion node");
  std::sort(ranked.begin(), ranked.end());

  if (mode == RoutingMode::kGeoDns) {
    const auto& n = nodes[std::get<2>(ranked.front())];
    out.node_index = std::get<2>(ranked.front());
    out.node_id = n.node_id;
    out.latency_ms = latency(model, device, n.location, rng) + n.probe_penalty_ms;
    return out;
  }

  const std::size_t k = std::min(kProbeCandidates, ranked.size());
  std::size_t best = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const auto& n = nodes[std::get<2>(ranked[c])];
    out.probes.push_back({n.node_id, latency(model, device, n.location, rng) + n.probe_penalty_ms});
    const auto& cur = out.probes[c];
    const auto& b = out.probes[best];
    if (cur.latency_ms < b.latency_ms || (cur.latency_ms == b.latency_ms && cur.node_id < b.node_id)) {
      best = c;
    }
  }
  out.node_index = std::get<2>(ranked[best]);
  out.node_id = out.probes[best].node_id;
  out.latency_ms = out.probes[best].latency_ms;
  return out;
}

void FleetScenario::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidScenario, msg); };
  if (regions.empty()) fail("scenario needs at least one region node");
  if (devices.empty()) fail("scenario needs at least one device");
  if (workload.empty() && uploads.empty()) fail("scenario defines no workload");
  std::set<std::string> ids;
  bool any_healthy = false;
  for (const auto& r : regions) {
    r.location.validate();
    if (!(r.ingest_capacity > 0.0)) fail("node " + r.node_id + " needs positive capacity");
    if (!ids.insert(r.node_id).second) fail("duplicate node id " + r.node_id);
    any_healthy |= r.healthy;
  }
  if (!any_healthy) fail("no healthy node");
  if (!ids.count(central_node)) fail("central node '" + central_node + "' is not a region");
  for (const auto& d : devices) d.location.validate();
  if (latency.per_km_ms < 0.0 || latency.base_ms < 0.0 || latency.jitter_sigma < 0.0) {
    fail("latency model parameters must be non-negative");
  }
  for (const auto& w : workload) {
    if (!(w.end_s >= w.start_s) || w.rate_per_s < 0.0) fail("bad workload segment");
  }
  for (const auto& u : uploads) {
    if (u.device >= devices.size()) fail("upload references unknown device");
  }
  for (const auto& p : partitions) {
    if (!ids.count(p.node_id)) fail("partition references unknown node " + p.node_id);
    if (p.start_s < 0.0 || p.duration_s < 0.0) fail("partition start and duration must be >= 0");
  }
  for (const auto& r : redeliveries) {
    if (!ids.count(r.node_id)) fail("redelivery references unknown node " + r.node_id);
  }
  if (!(replication.interval_s > 0.0)) fail("replication interval must be > 0");
  if (!(snapshot_interval_s > 0.0)) fail("snapshot interval must be > 0");
  if (processing.enabled) {
    autoscaler.validate();
    if (!(processing.mean_service_s > 0.0)) fail("processing service time must be > 0");
    if (processing.initial_workers < autoscaler.min_workers ||
        processing.initial_workers > autoscaler.max_workers) {
      fail("initial workers outside autoscaler bounds");
    }
  }
}

std::size_t FleetScenario::node_index(std::string_view node_id) const {
  for (std::size_t i = 0; i < regions.size(); ++i) {
    if (regions[i].node_id == node_id) return i;
  }
  throw Error(ErrorCode::kInvalidScenario, "unknown node " + std::string(node_id));
}

void inject_partition(FleetScenario& scenario, const std::string& node_id, double start_s,
                      double duration_s) {
  if (start_s < 0.0 || duration_s < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "partition start and duration must be >= 0");
  }
  scenario.node_index(node_id);
  if (duration_s == 0.0) return;
  scenario.partitions.push_back({node_id, start_s, duration_s});
}

std::vector<std::string> replicate_tick(std::vector<std::string>& unshipped,
                                        std::span<const Partition> partitions,
                                        std::string_view node_id, double now_s) {
  for (const auto& p : partitions) {
    if (p.node_id == node_id && p.covers(now_s)) return {};
  }
  std::vector<std::string> out;
  out.swap(unshipped);
  return out;
}

namespace {

using Micros = std::int64_t;

Micros to_us(double s) {
  if (!std::isfinite(s)) return std::numeric_limits<Micros>::max() / 4;
  return static_cast<Micros>(std::llround(s * 1e6));
}
double to_s(Micros t) { return static_cast<double>(t) / 1e6; }

enum class Ev : std::uint8_t {
  kArrival,
  kUpload,
  kDeliver,
  kServiceDone,
  kReplTick,
  kBatchArrive,
  kRedeliver,
  kProcDone,
  kAutoscale,
  kSnapshot,
};

struct Event {
  Micros t;
  std::uint64_t seq;
  Ev kind;
  std::uint32_t a;
};

struct Later {
  bool operator()(const Event& x, const Event& y) const {
    return std::tie(x.t, x.seq) > std::tie(y.t, y.seq);
  }
};

constexpr RoutingMode kModes[] = {RoutingMode::kCentralized, RoutingMode::kGeoDns,
                                  RoutingMode::kGeoDnsPlusProbes};

class Simulator {
 public:
  Simulator(const FleetScenario& sc, double duration_s, const SimOptions& opt)
      : sc_(sc), opt_(opt), duration_us_(to_us(duration_s)), nodes_(sc.regions.size()) {
    std::seed_seq seq{sc.seed, std::uint64_t{0x5eed}};
    std::vector<std::uint64_t> seeds(8);
    seq.generate(seeds.begin(), seeds.end());
    workload_rng_.seed(seeds[0]);
    for (int m = 0; m < 3; ++m) mode_rng_[m].seed(seeds[1 + m]);
    repl_rng_.seed(seeds[4]);
    proc_rng_.seed(seeds[5]);
    device_seq_.assign(sc.devices.size(), 0);
    workers_target_ = sc.processing.initial_workers;
    central_loc_ = sc.regions[sc.node_index(sc.central_node)].location;
    for (int m = 0; m < 3; ++m) {
      if (kModes[m] == sc.routing) primary_ = m;
    }
  }

  SimResult run() {
    schedule_initial();
    process_until(duration_us_);
    if (opt_.drain) drain();
    return finish();
  }

 private:
  struct Attempt {
    std::uint32_t clip;
    Micros sent;
    Micros arrived = 0;
    std::uint32_t node;
  };
  struct NodeState {
    std::deque<std::uint32_t> queue;  // attempts; front is in service
    std::vector<std::uint32_t> store;
    std::unordered_set<std::uint32_t> stored;
    std::vector<std::uint32_t> unshipped;
  };
  struct Batch {
    std::vector<std::uint32_t> clips;
    bool redelivery = false;
  };

  void push(Micros t, Ev kind, std::uint32_t a = 0) { events_.push({t, seq_++, kind, a}); }

  std::optional<Micros> next_arrival(Micros from) {
    double t = to_s(from);
    for (;;) {
      const WorkloadSegment* seg = nullptr;
      for (const auto& w : sc_.workload) {
        if (!(w.rate_per_s > 0.0) || w.end_s <= t) continue;
        if (w.start_s <= t) {
          seg = &w;
          break;
        }
        if (!seg || w.start_s < seg->start_s) seg = &w;
      }
      if (!seg) return std::nullopt;
      t = std::max(t, seg->start_s);
      std::exponential_distribution<double> exp(seg->rate_per_s);
      const double dt = exp(workload_rng_);
      if (t + dt < seg->end_s) {
        const Micros at = to_us(t + dt);
        if (at > duration_us_) return std::nullopt;
        return at;
      }
      t = seg->end_s;
    }
  }

  void schedule_initial() {
    if (auto a = next_arrival(0)) push(*a, Ev::kArrival);
    for (const auto& u : sc_.uploads) {
      const auto idx = intern(u.clip_id, static_cast<std::uint32_t>(u.device));
      push(to_us(u.t_s), Ev::kUpload, idx);
    }
    const Micros interval = to_us(sc_.replication.interval_s);
    for (std::uint32_t n = 0; n < nodes_.size(); ++n) push(interval, Ev::kReplTick, n);
    for (const auto& r : sc_.redeliveries) {
      push(to_us(r.at_s), Ev::kRedeliver, static_cast<std::uint32_t>(sc_.node_index(r.node_id)));
    }
    if (sc_.processing.enabled) push(to_us(sc_.autoscaler.evaluate_every_s), Ev::kAutoscale);
    push(0, Ev::kSnapshot);
  }

  std::uint32_t intern(const std::string& id, std::uint32_t device) {
    auto [it, inserted] = id_index_.emplace(id, static_cast<std::uint32_t>(clip_ids_.size()));
    if (inserted) {
      clip_ids_.push_back(id);
      clip_device_.push_back(device);
      ingest_us_.push_back(-1);
      central_us_.push_back(-1);
      proc_enq_us_.push_back(-1);
    }
    return it->second;
  }

  void process_until(Micros end) {
    while (!events_.empty() && events_.top().t <= end) {
      const Event ev = events_.top();
      events_.pop();
      now_ = ev.t;
      handle(ev);
      if (draining_ && !quiet_end_ && quiescent()) {
        quiet_end_ = now_ + to_us(sc_.replication.interval_s);
        return;
      }
    }
    now_ = std::max(now_, std::min(end, events_.empty() ? end : events_.top().t));
  }

  bool quiescent() const {
    if (in_flight_ != 0 || in_transit_ != 0) return false;
    for (const auto& n : nodes_) {
      if (!n.queue.empty() || !n.unshipped.empty()) return false;
    }
    return true;
  }

  void drain() {
    draining_ = true;
    double cap_s = sc_.replication.interval_s;
    for (const auto& p : sc_.partitions) {
      if (std::isfinite(p.duration_s)) cap_s = std::max(cap_s, p.start_s + p.duration_s - to_s(duration_us_));
    }
    const Micros cap = duration_us_ + to_us(cap_s + 2.0 * sc_.replication.interval_s);
    if (quiescent()) {
      quiet_end_ = now_ + to_us(sc_.replication.interval_s);
    } else {
      process_until(cap);
    }
    if (quiet_end_) {
      draining_ = false;
      process_until(*quiet_end_);
      now_ = *quiet_end_;
    } else {
      now_ = cap;
    }
  }

  void handle(const Event& ev) {
    switch (ev.kind) {
      case Ev::kArrival: {
        std::uniform_int_distribution<std::size_t> pick(0, sc_.devices.size() - 1);
        const auto dev = static_cast<std::uint32_t>(pick(workload_rng_));
        const std::string id = sc_.devices[dev].device_id + "-" + std::to_string(device_seq_[dev]++);
        upload(intern(id, dev));
        if (auto a = next_arrival(now_)) push(*a, Ev::kArrival);
        break;
      }
      case Ev::kUpload: upload(ev.a); break;
      case Ev::kDeliver: deliver(ev.a); break;
      case Ev::kServiceDone: service_done(ev.a); break;
      case Ev::kReplTick: repl_tick(ev.a); break;
      case Ev::kBatchArrive: batch_arrive(ev.a); break;
      case Ev::kRedeliver: redeliver(ev.a); break;
      case Ev::kProcDone: proc_done(ev.a); break;
      case Ev::kAutoscale: autoscale(); break;
      case Ev::kSnapshot:
        snapshot();
        push(now_ + to_us(sc_.snapshot_interval_s), Ev::kSnapshot);
        break;
    }
  }

  void upload(std::uint32_t clip) {
    const auto& device = sc_.devices[clip_device_[clip]].location;
    RoutingDecision primary;
    for (int m = 0; m < 3; ++m) {
      auto d = route(device, sc_.regions, sc_.central_node, sc_.latency, kModes[m], mode_rng_[m]);
      latencies_[m].push_back(d.latency_ms);
      if (m == primary_) primary = std::move(d);
    }
    attempts_.push_back({clip, now_, 0, static_cast<std::uint32_t>(primary.node_index)});
    ++uploads_sent_;
    ++in_flight_;
    push(now_ + to_us(primary.latency_ms / 1000.0), Ev::kDeliver,
         static_cast<std::uint32_t>(attempts_.size() - 1));
    if (opt_.record_routing) trace_.push_back(std::move(primary));
  }

  void deliver(std::uint32_t attempt) {
    --in_flight_;
    auto& a = attempts_[attempt];
    a.arrived = now_;
    auto& node = nodes_[a.node];
    node.queue.push_back(attempt);
    if (node.queue.size() == 1) start_service(a.node);
  }

  void start_service(std::uint32_t n) {
    const auto& a = attempts_[nodes_[n].queue.front()];
    queue_wait_ms_.push_back(to_s(now_ - a.arrived) * 1000.0);
    push(now_ + std::max<Micros>(1, to_us(1.0 / sc_.regions[n].ingest_capacity)), Ev::kServiceDone, n);
  }

  void service_done(std::uint32_t n) {
    auto& node = nodes_[n];
    const auto clip = attempts_[node.queue.front()].clip;
    node.queue.pop_front();
    if (node.stored.insert(clip).second) {
      node.store.push_back(clip);
      node.unshipped.push_back(clip);
      if (ingest_us_[clip] < 0) ingest_us_[clip] = now_;
      ++ingested_;
      if (sc_.processing.enabled) {
        proc_queue_.emplace_back(clip, now_);
        dispatch_processing();
      }
    } else {
      ++duplicate_uploads_;
    }
    if (!node.queue.empty()) start_service(n);
  }

  bool partitioned(std::uint32_t n) const {
    for (const auto& p : sc_.partitions) {
      if (p.node_id == sc_.regions[n].node_id && p.covers(to_s(now_))) return true;
    }
    return false;
  }

  void repl_tick(std::uint32_t n) {
    push(now_ + to_us(sc_.replication.interval_s), Ev::kReplTick, n);
    auto& node = nodes_[n];
    if (node.unshipped.empty()) return;
    if (partitioned(n)) {
      ++deferred_batches_;
      return;
    }
    Batch b;
    b.clips.swap(node.unshipped);
    in_transit_ += b.clips.size();
    send_batch(n, std::move(b));
  }

  void send_batch(std::uint32_t n, Batch b) {
    const double ms = latency(sc_.latency, sc_.regions[n].location, central_loc_, repl_rng_);
    batches_.push_back(std::move(b));
    push(now_ + to_us(ms / 1000.0), Ev::kBatchArrive, static_cast<std::uint32_t>(batches_.size() - 1));
  }

  void batch_arrive(std::uint32_t b) {
    auto& batch = batches_[b];
    for (auto clip : batch.clips) {
      if (central_us_[clip] >= 0) {
        ++duplicates_deduped_;
        continue;
      }
      central_us_[clip] = now_;
      ++replicated_;
      repl_lag_s_.push_back(to_s(now_ - ingest_us_[clip]));
    }
    if (!batch.redelivery) in_transit_ -= batch.clips.size();
    batch.clips.clear();
    batch.clips.shrink_to_fit();
  }

  void redeliver(std::uint32_t n) {
    if (partitioned(n)) return;
    Batch b;
    b.redelivery = true;
    for (auto clip : nodes_[n].store) {
      if (central_us_[clip] >= 0) b.clips.push_back(clip);
    }
    if (!b.clips.empty()) send_batch(n, std::move(b));
  }

  void dispatch_processing() {
    while (proc_busy_ < workers_target_ && !proc_queue_.empty()) {
      const auto [clip, enq] = proc_queue_.front();
      proc_queue_.pop_front();
      ++proc_busy_;
      const double sigma = sc_.processing.dispersion;
      const double service =
          sc_.processing.mean_service_s * lognormal_factor(sigma, proc_rng_) * std::exp(-0.5 * sigma * sigma);
      proc_enq_us_[clip] = enq;
      push(now_ + std::max<Micros>(1, to_us(service)), Ev::kProcDone, clip);
    }
  }

  void proc_done(std::uint32_t clip) {
    --proc_busy_;
    const Micros enq = proc_enq_us_[clip];
    const double ms = to_s(now_ - enq) * 1000.0;
    proc_latency_s_.push_back(ms / 1000.0);
    proc_window_.emplace_back(now_, ms);
    ++processed_;
    dispatch_processing();
  }

  double windowed_p95_ms() {
    const Micros horizon = now_ - to_us(sc_.processing.metrics_window_s);
    while (!proc_window_.empty() && proc_window_.front().first < horizon) proc_window_.pop_front();
    std::vector<double> v;
    v.reserve(proc_window_.size());
    for (const auto& [t, ms] : proc_window_) v.push_back(ms);
    double p95 = summarize(std::move(v)).p95;
    if (!proc_queue_.empty()) p95 = std::max(p95, to_s(now_ - proc_queue_.front().second) * 1000.0);
    return p95;
  }

  void autoscale() {
    push(now_ + to_us(sc_.autoscaler.evaluate_every_s), Ev::kAutoscale);
    const double p95 = windowed_p95_ms();
    WorkerPool pool{ResourceClass::kGpu, workers_target_, sc_.autoscaler.min_workers,
                    sc_.autoscaler.max_workers};
    const auto d = autoscale_tick(sc_.autoscaler, {proc_queue_.size(), p95}, pool, to_s(now_), scaler_);
    if (d.action == ScaleAction::kUp) workers_target_ += d.count;
    if (d.action == ScaleAction::kDown) workers_target_ -= d.count;
    if (d.action != ScaleAction::kHold) {
      autoscale_events_.push_back({to_s(now_), d.action, d.count, workers_target_});
    }
    worker_series_.emplace_back(to_s(now_), workers_target_);
    p95_series_.emplace_back(to_s(now_), p95);
    dispatch_processing();
  }

  std::size_t node_resident() const {
    std::size_t r = 0;
    for (const auto& n : nodes_) r += n.unshipped.size();
    return r;
  }

  void snapshot() {
    snapshots_.push_back({to_s(now_), uploads_sent_, in_flight_, ingested_, replicated_, in_transit_,
                          node_resident()});
  }

  std::optional<double> spike_recovery() const {
    for (std::size_t i = 1; i < sc_.workload.size(); ++i) {
      const auto& prev = sc_.workload[i - 1];
      const auto& seg = sc_.workload[i];
      if (!(prev.rate_per_s > 0.0 && seg.rate_per_s >= 2.0 * prev.rate_per_s)) continue;
      std::optional<double> last_violation;
      for (const auto& [t, p95] : p95_series_) {
        if (t >= seg.start_s && t <= seg.end_s && p95 > sc_.autoscaler.latency_slo_ms) last_violation = t;
      }
      if (!last_violation) return 0.0;
      for (const auto& [t, p95] : p95_series_) {
        if (t > *last_violation && t <= seg.end_s) return t - seg.start_s;
      }
      return std::nullopt;
    }
    return std::nullopt;
  }

  SimResult finish() {
    snapshot();
    SimResult res;
    auto& rep = res.report;
    rep.scenario = sc_.name;
    rep.routing = sc_.routing;
    rep.seed = sc_.seed;
    rep.duration_s = to_s(duration_us_);
    rep.end_time_s = to_s(now_);
    for (int m = 0; m < 3; ++m) rep.ingest_latency_ms[kModes[m]] = summarize(latencies_[m]);
    rep.node_queue_wait_ms = summarize(queue_wait_ms_);
    rep.replication_lag_s = summarize(repl_lag_s_);
    rep.processing_latency_s = summarize(proc_latency_s_);
    rep.worker_series = worker_series_;
    rep.processing_p95_series_ms = p95_series_;
    rep.autoscale_events = autoscale_events_;
    rep.spike_recovery_s = spike_recovery();
    rep.counts = {uploads_sent_, ingested_, duplicate_uploads_, replicated_, in_transit_, node_resident(),
                  duplicates_deduped_, deferred_batches_, processed_};
    rep.snapshots = snapshots_;

    std::set<std::string> node_union;
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
      auto& ids = res.node_stores[sc_.regions[n].node_id];
      for (auto clip : nodes_[n].store) {
        ids.push_back(clip_ids_[clip]);
        node_union.insert(clip_ids_[clip]);
      }
      std::sort(ids.begin(), ids.end());
    }
    for (std::size_t c = 0; c < clip_ids_.size(); ++c) {
      if (central_us_[c] >= 0) res.central_store.push_back(clip_ids_[c]);
      if (ingest_us_[c] >= 0) res.ingest_time_s[clip_ids_[c]] = to_s(ingest_us_[c]);
    }
    std::sort(res.central_store.begin(), res.central_store.end());
    rep.consistent = std::equal(node_union.begin(), node_union.end(), res.central_store.begin(),
                                res.central_store.end());
    rep.unreplicated_residue = ingested_ - replicated_;
    res.routing_trace = std::move(trace_);
    return res;
  }

  const FleetScenario& sc_;
  SimOptions opt_;
  Micros duration_us_;
  Micros now_ = 0;
  std::uint64_t seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  Rng workload_rng_, repl_rng_, proc_rng_;
  Rng mode_rng_[3];
  int primary_ = 2;
  GeoPoint central_loc_;

  std::unordered_map<std::string, std::uint32_t> id_index_;
  std::vector<std::string> clip_ids_;
  std::vector<std::uint32_t> clip_device_;
  std::vector<Micros> ingest_us_;
  std::vector<Micros> central_us_;
  std::vector<std::uint64_t> device_seq_;
  std::vector<Attempt> attempts_;
  std::vector<NodeState> nodes_;
  std::vector<Batch> batches_;

  std::deque<std::pair<std::uint32_t, Micros>> proc_queue_;
  std::vector<Micros> proc_enq_us_;
  std::deque<std::pair<Micros, double>> proc_window_;
  int workers_target_ = 0;
  int proc_busy_ = 0;
  AutoscalerState scaler_;

  std::vector<double> latencies_[3];
  std::vector<double> queue_wait_ms_, repl_lag_s_, proc_latency_s_;
  std::vector<std::pair<double, int>> worker_series_;
  std::vector<std::pair<double, double>> p95_series_;
  std::vector<AutoscaleEvent> autoscale_events_;
  std::vector<Snapshot> snapshots_;
  std::vector<RoutingDecision> trace_;

  std::size_t uploads_sent_ = 0, in_flight_ = 0, ingested_ = 0, duplicate_uploads_ = 0;
  std::size_t replicated_ = 0, in_transit_ = 0, duplicates_deduped_ = 0, deferred_batches_ = 0;
  std::size_t processed_ = 0;
  bool draining_ = false;
  std::optional<Micros> quiet_end_;
};

}  // namespace

SimResult run(const FleetScenario& scenario, double duration_s, const SimOptions& options) {
  scenario.validate();
  if (!(duration_s >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "duration must be >= 0");
  Simulator sim(scenario, duration_s, options);
  return sim.run();
}

std::string_view to_string(RoutingMode mode) {
  switch (mode) {
    case RoutingMode::kCentralized: return "centralized";
    case RoutingMode::kGeoDns: return "geo_dns";
    case RoutingMode::kGeoDnsPlusProbes: return "geo_dns_plus_probes";
  }
  return "?";
}

RoutingMode routing_mode_from_string(std::string_view s) {
  if (s == "centralized") return RoutingMode::kCentralized;
  if (s == "geo" || s == "geo_dns") return RoutingMode::kGeoDns;
  if (s == "probes" || s == "geo_dns_plus_probes") return RoutingMode::kGeoDnsPlusProbes;
  throw Error(ErrorCode::kInvalidArgument, "unknown routing mode '" + std::string(s) + "'");
}

}  // namespace egocollect::fleet
