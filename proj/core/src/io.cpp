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

#include "egocollect/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "egocollect/error.hpp"
#include "json.hpp"

namespace egocollect::io {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::kParse, source + ":" + std::to_string(line) + ": " + msg);
}

[[noreturn]] void parse_fail(const std::string& source, const std::string& msg) {
  throw Error(ErrorCode::kParse, source + ": " + msg);
}

std::string dump(const ojson& j, bool pretty) { return pretty ? j.dump(2) : j.dump(); }

json parse_doc(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Map the byte offset back to a line number.
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    parse_fail(source, line, e.what());
  }
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool getline_stripped(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t") == std::string::npos; }

// Typed field access with a useful message.
template <typename T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::kParse, where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, where + ": field '" + key + "': " + e.what());
  }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return field<T>(j, key, where);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok |= k == a;
    if (!ok) throw Error(ErrorCode::kParse, where + ": unknown field '" + k + "'");
  }
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, path.string() + ": cannot open");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, path.string() + ": cannot write");
  return out;
}

ojson percentiles(const Percentiles& p) {
  ojson j;
  j["p50"] = p.p50;
  j["p95"] = p.p95;
  j["p99"] = p.p99;
  j["mean"] = p.mean;
  j["max"] = p.max;
  j["count"] = p.count;
  return j;
}

ojson reason_json(const qc::Reason& r) {
  ojson j;
  j["kind"] = std::string(qc::to_string(r.kind));
  if (r.kind == qc::ReasonKind::kVelocityOutlier) j["frames"] = r.frames;
  if (r.kind == qc::ReasonKind::kReprojection) j["mean_px"] = r.mean_px;
  if (r.kind == qc::ReasonKind::kMalformed) j["message"] = r.message;
  return j;
}

}  // namespace

// --- trajectories ----------------------------------------------------------

metrics::Trajectory read_tum(std::istream& in, const std::string& source) {
  metrics::Trajectory traj;
  std::string line;
  std::size_t lineno = 0;
  while (getline_stripped(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    if (line[line.find_first_not_of(" \t")] == '#') continue;
    std::istringstream ss(line);
    double v[8];
    std::string tok;
    int n = 0;
    while (ss >> tok) {
      if (n == 8) parse_fail(source, lineno, "expected 8 values, found more");
      char* end = nullptr;
      v[n] = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size() || !std::isfinite(v[n])) {
        parse_fail(source, lineno, "not a finite number: '" + tok + "'");
      }
      ++n;
    }
    if (n != 8) parse_fail(source, lineno, "expected 8 values, found " + std::to_string(n));
    const double qn = std::sqrt(v[4] * v[4] + v[5] * v[5] + v[6] * v[6] + v[7] * v[7]);
    if (!(qn > 1e-12)) parse_fail(source, lineno, "zero quaternion");
    if (!traj.samples.empty() && !(v[0] > traj.samples.back().t)) {
      parse_fail(source, lineno, "timestamp not increasing");
    }
    metrics::TimedPose p;
    p.t = v[0];
    p.pose.translation = geometry::Vec3(v[1], v[2], v[3]);
    p.pose.rotation = geometry::UnitQuaternion(v[7], v[4], v[5], v[6]);
    traj.samples.push_back(p);
  }
  return traj;
}

metrics::Trajectory read_tum_file(const fs::path& path) {
  auto in = open_in(path);
  return read_tum(in, path.string());
}

void write_tum(std::ostream& out, const metrics::Trajectory& traj) {
  out << "# timestamp tx ty tz qx qy qz qw\n";
  for (const auto& s : traj.samples) {
    const auto& t = s.pose.translation;
    const auto& q = s.pose.rotation;
    out << fmt17(s.t) << ' ' << fmt17(t.x()) << ' ' << fmt17(t.y()) << ' ' << fmt17(t.z()) << ' '
        << fmt17(q.x()) << ' ' << fmt17(q.y()) << ' ' << fmt17(q.z()) << ' ' << fmt17(q.w()) << '\n';
  }
}

void write_tum_file(const fs::path& path, const metrics::Trajectory& traj) {
  auto out = open_out(path);
  write_tum(out, traj);
}

// --- joints and pixels -----------------------------------------------------

namespace {

template <typename Fn>
void for_each_jsonl(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (getline_stripped(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      parse_fail(source, lineno, e.what());
    }
    try {
      fn(j, source + ":" + std::to_string(lineno));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kParse) throw;
      parse_fail(source, lineno, e.what());
    } catch (const json::exception& e) {
      parse_fail(source, lineno, e.what());
    }
  }
}

template <std::size_t D>
std::array<double, D> point(const json& p, const std::string& where) {
  if (!p.is_array() || p.size() != D) {
    throw Error(ErrorCode::kParse, where + ": expected an array of " + std::to_string(D) + " numbers");
  }
  std::array<double, D> out{};
  for (std::size_t k = 0; k < D; ++k) {
    if (!p[k].is_number()) throw Error(ErrorCode::kParse, where + ": non-numeric coordinate");
    out[k] = p[k].get<double>();
  }
  return out;
}

}  // namespace

std::vector<metrics::JointFrame> read_joints_jsonl(std::istream& in, const std::string& source) {
  std::vector<metrics::JointFrame> frames;
  for_each_jsonl(in, source, [&](const json& j, const std::string& where) {
    metrics::JointFrame f;
    f.t = field<double>(j, "t", where);
    const auto& joints = j.contains("joints") ? j.at("joints") : json();
    if (!joints.is_array() || joints.size() != metrics::kNumJoints) {
      throw Error(ErrorCode::kParse, where + ": 'joints' must hold 21 points");
    }
    for (std::size_t k = 0; k < metrics::kNumJoints; ++k) {
      const auto p = point<3>(joints[k], where);
      f.joints[k] = geometry::Vec3(p[0], p[1], p[2]);
    }
    frames.push_back(f);
  });
  return frames;
}

std::vector<metrics::JointFrame> read_joints_file(const fs::path& path) {
  auto in = open_in(path);
  return read_joints_jsonl(in, path.string());
}

void write_joints_jsonl(std::ostream& out, const std::vector<metrics::JointFrame>& frames) {
  for (const auto& f : frames) {
    ojson j;
    j["t"] = f.t;
    ojson pts = ojson::array();
    for (const auto& p : f.joints) pts.push_back({p.x(), p.y(), p.z()});
    j["joints"] = std::move(pts);
    out << j.dump() << '\n';
  }
}

void write_joints_file(const fs::path& path, const std::vector<metrics::JointFrame>& frames) {
  auto out = open_out(path);
  write_joints_jsonl(out, frames);
}

std::vector<qc::PixelFrame> read_pixels_jsonl(std::istream& in, const std::string& source) {
  std::vector<qc::PixelFrame> frames;
  for_each_jsonl(in, source, [&](const json& j, const std::string& where) {
    const auto& px = j.contains("pixels") ? j.at("pixels") : json();
    if (!px.is_array() || px.size() != metrics::kNumJoints) {
      throw Error(ErrorCode::kParse, where + ": 'pixels' must hold 21 points");
    }
    qc::PixelFrame f;
    for (std::size_t k = 0; k < metrics::kNumJoints; ++k) {
      const auto p = point<2>(px[k], where);
      f[k] = {p[0], p[1]};
    }
    frames.push_back(f);
  });
  return frames;
}

void write_pixels_jsonl(std::ostream& out, const std::vector<qc::PixelFrame>& pixels,
                        const std::vector<double>& timestamps) {
  if (timestamps.size() != pixels.size()) {
    throw Error(ErrorCode::kLengthMismatch, "one timestamp per pixel frame required");
  }
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    ojson j;
    j["t"] = timestamps[i];
    ojson pts = ojson::array();
    for (const auto& p : pixels[i]) pts.push_back({p.u, p.v});
    j["pixels"] = std::move(pts);
    out << j.dump() << '\n';
  }
}

geometry::CameraIntrinsics parse_intrinsics(const std::string& text, const std::string& source) {
  const json j = parse_doc(text, source);
  check_keys(j, {"fx", "fy", "cx", "cy", "k1", "k2", "k3", "width", "height"}, source);
  geometry::CameraIntrinsics c;
  c.fx = field<double>(j, "fx", source);
  c.fy = field<double>(j, "fy", source);
  c.cx = field<double>(j, "cx", source);
  c.cy = field<double>(j, "cy", source);
  c.k1 = field_or<double>(j, "k1", 0.0, source);
  c.k2 = field_or<double>(j, "k2", 0.0, source);
  c.k3 = field_or<double>(j, "k3", 0.0, source);
  c.width = field<int>(j, "width", source);
  c.height = field<int>(j, "height", source);
  try {
    c.validate();
  } catch (const Error& e) {
    parse_fail(source, e.what());
  }
  return c;
}

std::string intrinsics_json(const geometry::CameraIntrinsics& c) {
  ojson j;
  j["fx"] = c.fx;
  j["fy"] = c.fy;
  j["cx"] = c.cx;
  j["cy"] = c.cy;
  j["k1"] = c.k1;
  j["k2"] = c.k2;
  j["k3"] = c.k3;
  j["width"] = c.width;
  j["height"] = c.height;
  return j.dump(2);
}

// --- reports ---------------------------------------------------------------

std::string report_json(const metrics::TrajectoryReport& r, bool pretty) {
  ojson j;
  j["ate_rmse_m"] = r.ate_rmse_m;
  j["ate_s_rmse_m"] = r.ate_s_rmse_m;
  j["rpe_trans_rmse_m"] = r.rpe_trans_rmse_m;
  j["rpe_rot_rmse_deg"] = r.rpe_rot_rmse_deg;
  j["n_pairs"] = r.n_pairs;
  return dump(j, pretty);
}

std::string report_json(const metrics::PoseReport& r, bool pretty) {
  ojson j;
  j["mpjpe_mm"] = r.mpjpe_mm;
  j["pa_mpjpe_mm"] = r.pa_mpjpe_mm;
  j["auc"] = r.auc;
  j["n_frames"] = r.n_frames;
  return dump(j, pretty);
}

std::string verdict_json(const qc::QCVerdict& v) {
  ojson j;
  j["clip_id"] = v.clip_id;
  j["outcome"] = std::string(qc::to_string(v.outcome));
  ojson reasons = ojson::array();
  for (const auto& r : v.reasons) reasons.push_back(reason_json(r));
  j["reasons"] = std::move(reasons);
  ojson s;
  s["flagged_frames"] = v.stats.flagged_frames;
  s["mean_reproj_px"] = v.stats.mean_reproj_px;
  s["max_reproj_px"] = v.stats.max_reproj_px;
  s["velocity_mean"] = v.stats.velocity_mean;
  s["velocity_sigma"] = v.stats.velocity_sigma;
  j["stats"] = std::move(s);
  return j.dump();
}

std::string pool_json(const qc::HardNegativePool& pool, bool pretty) {
  ojson arr = ojson::array();
  for (const auto& e : pool.entries()) {
    ojson j;
    j["clip_id"] = e.clip_id;
    j["category"] = std::string(qc::to_string(e.category));
    j["enqueued_at"] = e.enqueued_at;
    ojson reasons = ojson::array();
    for (const auto& r : e.reasons) reasons.push_back(reason_json(r));
    j["reasons"] = std::move(reasons);
    arr.push_back(std::move(j));
  }
  return dump(arr, pretty);
}

std::string report_json(const pipeline::RunReport& r, bool pretty) {
  ojson j;
  j["makespan_s"] = r.makespan_s;
  j["throughput_per_s"] = r.throughput_per_s;
  j["sink_outputs"] = r.sink_outputs;
  j["roots"] = {{"inputs", r.roots.inputs},
                {"sink", r.roots.sink},
                {"pool", r.roots.pool},
                {"error", r.roots.error},
                {"in_flight", r.roots.in_flight}};
  j["end_to_end_s"] = percentiles(r.end_to_end_s);
  ojson util;
  for (const auto& [rc, u] : r.utilization) util[std::string(to_string(rc))] = u;
  j["utilization"] = std::move(util);
  ojson stages;
  for (const auto& [id, s] : r.stages) {
    ojson st;
    st["dispatched"] = s.dispatched;
    st["completed"] = s.completed;
    st["latency_s"] = percentiles(s.latency_s);
    ojson vc;
    for (const auto& [v, c] : s.version_counts) vc[v] = c;
    st["version_counts"] = std::move(vc);
    st["queue_depth"] = s.queue_depth;
    stages[id] = std::move(st);
  }
  j["stages"] = std::move(stages);
  j["series_t"] = r.series_t;
  ojson swaps = ojson::array();
  for (const auto& s : r.swaps) {
    swaps.push_back({{"op", s.op},
                     {"old_version", s.old_version},
                     {"new_version", s.new_version},
                     {"swap_time", s.swap_time},
                     {"in_flight_count", s.in_flight_count},
                     {"noop", s.noop}});
  }
  j["swaps"] = std::move(swaps);
  return dump(j, pretty);
}

std::string report_json(const fleet::SimReport& r, bool pretty) {
  ojson j;
  j["scenario"] = r.scenario;
  j["routing"] = std::string(fleet::to_string(r.routing));
  j["seed"] = r.seed;
  j["duration_s"] = r.duration_s;
  j["end_time_s"] = r.end_time_s;
  ojson lat;
  for (const auto& [mode, p] : r.ingest_latency_ms) lat[std::string(fleet::to_string(mode))] = percentiles(p);
  j["ingest_latency_ms"] = std::move(lat);
  j["node_queue_wait_ms"] = percentiles(r.node_queue_wait_ms);
  j["replication_lag_s"] = percentiles(r.replication_lag_s);
  j["processing_latency_s"] = percentiles(r.processing_latency_s);
  const auto& c = r.counts;
  j["counts"] = {{"uploads_sent", c.uploads_sent},
                 {"ingested", c.ingested},
                 {"duplicate_uploads", c.duplicate_uploads},
                 {"replicated", c.replicated},
                 {"in_transit", c.in_transit},
                 {"node_resident", c.node_resident},
                 {"duplicates_deduped", c.duplicates_deduped},
                 {"deferred_batches", c.deferred_batches},
                 {"processed", c.processed}};
  j["consistent"] = r.consistent;
  j["unreplicated_residue"] = r.unreplicated_residue;
  j["spike_recovery_s"] = r.spike_recovery_s ? ojson(*r.spike_recovery_s) : ojson(nullptr);
  ojson ev = ojson::array();
  for (const auto& e : r.autoscale_events) {
    ev.push_back({{"t_s", e.t_s},
                  {"action", std::string(fleet::to_string(e.action))},
                  {"count", e.count},
                  {"workers_after", e.workers_after}});
  }
  j["autoscale_events"] = std::move(ev);
  ojson ws = ojson::array();
  for (const auto& [t, n] : r.worker_series) ws.push_back({t, n});
  j["worker_series"] = std::move(ws);
  ojson ps = ojson::array();
  for (const auto& [t, v] : r.processing_p95_series_ms) ps.push_back({t, v});
  j["processing_p95_series_ms"] = std::move(ps);
  ojson snaps = ojson::array();
  for (const auto& s : r.snapshots) {
    snaps.push_back({{"t_s", s.t_s},
                     {"uploads_sent", s.uploads_sent},
                     {"upload_in_flight", s.upload_in_flight},
                     {"ingested", s.ingested},
                     {"replicated", s.replicated},
                     {"in_transit", s.in_transit},
                     {"node_resident", s.node_resident}});
  }
  j["snapshots"] = std::move(snaps);
  return dump(j, pretty);
}

std::string snapshots_csv(const fleet::SimReport& r) {
  std::ostringstream out;
  out << "t_s,uploads_sent,upload_in_flight,ingested,replicated,in_transit,node_resident\n";
  for (const auto& s : r.snapshots) {
    out << fmt17(s.t_s) << ',' << s.uploads_sent << ',' << s.upload_in_flight << ',' << s.ingested << ','
        << s.replicated << ',' << s.in_transit << ',' << s.node_resident << '\n';
  }
  return out.str();
}

std::string stats_json(const device::DashboardStats& s, bool pretty) {
  ojson j;
  j["total_recorded_s"] = s.total_recorded_s;
  j["effective_interaction_s"] = s.effective_interaction_s;
  j["uploaded_count"] = s.uploaded_count;
  j["discarded_count"] = s.discarded_count;
  j["saved_count"] = s.saved_count;
  j["rejected_count"] = s.rejected_count;
  j["saved_s"] = s.saved_s;
  j["discarded_s"] = s.discarded_s;
  j["dropped_events"] = s.dropped_events;
  j["storage_bytes"] = s.storage_bytes;
  return dump(j, pretty);
}

// --- pipeline spec ---------------------------------------------------------

pipeline::PipelineSpec parse_pipeline_spec(const std::string& text, const std::string& source) {
  const json j = parse_doc(text, source);
  check_keys(j, {"stages", "edges", "retries"}, source);
  pipeline::PipelineSpec spec;
  if (!j.contains("stages") || !j.at("stages").is_array()) parse_fail(source, "'stages' must be an array");
  for (const auto& st : j.at("stages")) {
    check_keys(st, {"id", "op", "version"}, source + ": stage");
    pipeline::StageSpec s;
    s.id = field<std::string>(st, "id", source);
    s.op = field<std::string>(st, "op", source);
    if (st.contains("version") && !st.at("version").is_null()) s.version = field<std::string>(st, "version", source);
    spec.stages.push_back(std::move(s));
  }
  if (j.contains("edges")) {
    if (!j.at("edges").is_array()) parse_fail(source, "'edges' must be an array");
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
        parse_fail(source, "each edge must be [\"from\", \"to\"]");
      }
      spec.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }
  spec.retries = field_or<int>(j, "retries", 0, source);
  return spec;
}

std::string pipeline_spec_json(const pipeline::PipelineSpec& spec, bool pretty) {
  ojson j;
  ojson stages = ojson::array();
  for (const auto& s : spec.stages) {
    ojson st;
    st["id"] = s.id;
    st["op"] = s.op;
    if (s.version) st["version"] = *s.version;
    stages.push_back(std::move(st));
  }
  j["stages"] = std::move(stages);
  ojson edges = ojson::array();
  for (const auto& [a, b] : spec.edges) edges.push_back({a, b});
  j["edges"] = std::move(edges);
  if (spec.retries != 0) j["retries"] = spec.retries;
  return dump(j, pretty);
}

// --- scenario --------------------------------------------------------------

fleet::FleetScenario parse_scenario(const std::string& text, const std::string& source) {
  const json j = parse_doc(text, source);
  check_keys(j, {"name", "seed", "routing", "central_node", "regions", "devices", "latency", "workload",
                 "uploads", "partitions", "redeliveries", "replication", "autoscaler", "processing",
                 "snapshot_interval_s"},
             source);
  fleet::FleetScenario sc;
  sc.name = field_or<std::string>(j, "name", sc.name, source);
  sc.seed = field_or<std::uint64_t>(j, "seed", 0, source);
  if (j.contains("routing")) {
    try {
      sc.routing = fleet::routing_mode_from_string(field<std::string>(j, "routing", source));
    } catch (const Error& e) {
      parse_fail(source, e.what());
    }
  }
  sc.central_node = field<std::string>(j, "central_node", source);
  sc.snapshot_interval_s = field_or<double>(j, "snapshot_interval_s", sc.snapshot_interval_s, source);

  if (!j.contains("regions") || !j.at("regions").is_array()) parse_fail(source, "'regions' must be an array");
  for (const auto& r : j.at("regions")) {
    const std::string where = source + ": region";
    check_keys(r, {"id", "lat", "lon", "ingest_capacity", "healthy", "probe_penalty_ms"}, where);
    fleet::RegionNode n;
    n.node_id = field<std::string>(r, "id", where);
    n.location = {field<double>(r, "lat", where), field<double>(r, "lon", where)};
    n.ingest_capacity = field_or<double>(r, "ingest_capacity", n.ingest_capacity, where);
    n.healthy = field_or<bool>(r, "healthy", true, where);
    n.probe_penalty_ms = field_or<double>(r, "probe_penalty_ms", 0.0, where);
    sc.regions.push_back(std::move(n));
  }

  if (j.contains("devices")) {
    const auto& d = j.at("devices");
    if (d.is_array()) {
      for (const auto& e : d) {
        const std::string where = source + ": device";
        check_keys(e, {"id", "lat", "lon"}, where);
        sc.devices.push_back({field<std::string>(e, "id", where),
                              {field<double>(e, "lat", where), field<double>(e, "lon", where)}});
      }
    } else if (d.is_object()) {
      check_keys(d, {"count", "radius_km"}, source + ": devices");
      const int count = field<int>(d, "count", source);
      const double radius = field_or<double>(d, "radius_km", 500.0, source);
      if (count < 0 || !(radius >= 0.0)) parse_fail(source, "device count and radius must be >= 0");
      if (sc.regions.empty()) parse_fail(source, "devices by count need at least one region");
      synth::place_devices(sc, count, radius, sc.seed);
    } else {
      parse_fail(source, "'devices' must be an array or {\"count\", \"radius_km\"}");
    }
  }

  if (j.contains("latency")) {
    const auto& l = j.at("latency");
    check_keys(l, {"per_km_ms", "base_ms", "jitter_sigma"}, source + ": latency");
    sc.latency.per_km_ms = field_or<double>(l, "per_km_ms", sc.latency.per_km_ms, source);
    sc.latency.base_ms = field_or<double>(l, "base_ms", sc.latency.base_ms, source);
    sc.latency.jitter_sigma = field_or<double>(l, "jitter_sigma", sc.latency.jitter_sigma, source);
  }
  if (j.contains("workload")) {
    for (const auto& w : j.at("workload")) {
      check_keys(w, {"start_s", "end_s", "rate_per_s"}, source + ": workload");
      sc.workload.push_back({field<double>(w, "start_s", source), field<double>(w, "end_s", source),
                             field<double>(w, "rate_per_s", source)});
    }
  }
  if (j.contains("uploads")) {
    for (const auto& u : j.at("uploads")) {
      check_keys(u, {"t_s", "device", "clip_id"}, source + ": upload");
      sc.uploads.push_back({field<double>(u, "t_s", source), field<std::size_t>(u, "device", source),
                            field<std::string>(u, "clip_id", source)});
    }
  }
  if (j.contains("partitions")) {
    for (const auto& p : j.at("partitions")) {
      check_keys(p, {"node_id", "start_s", "duration_s"}, source + ": partition");
      // null duration marks a permanent partition
      sc.partitions.push_back({field<std::string>(p, "node_id", source), field<double>(p, "start_s", source),
                               field_or<double>(p, "duration_s", std::numeric_limits<double>::infinity(), source)});
    }
  }
  if (j.contains("redeliveries")) {
    for (const auto& r : j.at("redeliveries")) {
      check_keys(r, {"node_id", "at_s"}, source + ": redelivery");
      sc.redeliveries.push_back({field<std::string>(r, "node_id", source), field<double>(r, "at_s", source)});
    }
  }
  if (j.contains("replication")) {
    check_keys(j.at("replication"), {"interval_s"}, source + ": replication");
    sc.replication.interval_s = field_or<double>(j.at("replication"), "interval_s", sc.replication.interval_s, source);
  }
  if (j.contains("autoscaler")) {
    const auto& a = j.at("autoscaler");
    const std::string where = source + ": autoscaler";
    check_keys(a, {"queue_high", "queue_low", "latency_slo_ms", "evaluate_every_s", "cooldown_s", "step_up",
                   "step_down", "min_workers", "max_workers"},
               where);
    auto& p = sc.autoscaler;
    p.queue_high = field_or<int>(a, "queue_high", p.queue_high, where);
    p.queue_low = field_or<int>(a, "queue_low", p.queue_low, where);
    p.latency_slo_ms = field_or<double>(a, "latency_slo_ms", p.latency_slo_ms, where);
    p.evaluate_every_s = field_or<double>(a, "evaluate_every_s", p.evaluate_every_s, where);
    p.cooldown_s = field_or<double>(a, "cooldown_s", p.cooldown_s, where);
    p.step_up = field_or<int>(a, "step_up", p.step_up, where);
    p.step_down = field_or<int>(a, "step_down", p.step_down, where);
    p.min_workers = field_or<int>(a, "min_workers", p.min_workers, where);
    p.max_workers = field_or<int>(a, "max_workers", p.max_workers, where);
  }
  if (j.contains("processing")) {
    const auto& p = j.at("processing");
    const std::string where = source + ": processing";
    check_keys(p, {"enabled", "mean_service_s", "dispersion", "initial_workers", "metrics_window_s"}, where);
    auto& t = sc.processing;
    t.enabled = field_or<bool>(p, "enabled", t.enabled, where);
    t.mean_service_s = field_or<double>(p, "mean_service_s", t.mean_service_s, where);
    t.dispersion = field_or<double>(p, "dispersion", t.dispersion, where);
    t.initial_workers = field_or<int>(p, "initial_workers", t.initial_workers, where);
    t.metrics_window_s = field_or<double>(p, "metrics_window_s", t.metrics_window_s, where);
  }
  try {
    sc.validate();
  } catch (const Error& e) {
    parse_fail(source, e.what());
  }
  return sc;
}

std::string scenario_json(const fleet::FleetScenario& sc, bool pretty) {
  ojson j;
  j["name"] = sc.name;
  j["seed"] = sc.seed;
  j["routing"] = std::string(fleet::to_string(sc.routing));
  j["central_node"] = sc.central_node;
  j["snapshot_interval_s"] = sc.snapshot_interval_s;
  j["latency"] = {{"per_km_ms", sc.latency.per_km_ms},
                  {"base_ms", sc.latency.base_ms},
                  {"jitter_sigma", sc.latency.jitter_sigma}};
  ojson regions = ojson::array();
  for (const auto& r : sc.regions) {
    regions.push_back({{"id", r.node_id},
                       {"lat", r.location.lat},
                       {"lon", r.location.lon},
                       {"ingest_capacity", r.ingest_capacity},
                       {"healthy", r.healthy},
                       {"probe_penalty_ms", r.probe_penalty_ms}});
  }
  j["regions"] = std::move(regions);
  ojson workload = ojson::array();
  for (const auto& w : sc.workload) {
    workload.push_back({{"start_s", w.start_s}, {"end_s", w.end_s}, {"rate_per_s", w.rate_per_s}});
  }
  j["workload"] = std::move(workload);
  ojson uploads = ojson::array();
  for (const auto& u : sc.uploads) uploads.push_back({{"t_s", u.t_s}, {"device", u.device}, {"clip_id", u.clip_id}});
  j["uploads"] = std::move(uploads);
  ojson parts = ojson::array();
  for (const auto& p : sc.partitions) {
    parts.push_back({{"node_id", p.node_id},
                     {"start_s", p.start_s},
                     {"duration_s", std::isfinite(p.duration_s) ? ojson(p.duration_s) : ojson(nullptr)}});
  }
  j["partitions"] = std::move(parts);
  ojson red = ojson::array();
  for (const auto& r : sc.redeliveries) red.push_back({{"node_id", r.node_id}, {"at_s", r.at_s}});
  j["redeliveries"] = std::move(red);
  j["replication"] = {{"interval_s", sc.replication.interval_s}};
  const auto& a = sc.autoscaler;
  j["autoscaler"] = {{"queue_high", a.queue_high},       {"queue_low", a.queue_low},
                     {"latency_slo_ms", a.latency_slo_ms}, {"evaluate_every_s", a.evaluate_every_s},
                     {"cooldown_s", a.cooldown_s},         {"step_up", a.step_up},
                     {"step_down", a.step_down},           {"min_workers", a.min_workers},
                     {"max_workers", a.max_workers}};
  const auto& p = sc.processing;
  j["processing"] = {{"enabled", p.enabled},
                     {"mean_service_s", p.mean_service_s},
                     {"dispersion", p.dispersion},
                     {"initial_workers", p.initial_workers},
                     {"metrics_window_s", p.metrics_window_s}};
  ojson devices = ojson::array();
  for (const auto& d : sc.devices) {
    devices.push_back({{"id", d.device_id}, {"lat", d.location.lat}, {"lon", d.location.lon}});
  }
  j["devices"] = std::move(devices);
  return dump(j, pretty);
}

// --- device ----------------------------------------------------------------

device::DeviceConfig parse_device_config(const std::string& text, const std::string& source) {
  const json j = parse_doc(text, source);
  check_keys(j, {"trigger_threshold", "release_threshold", "release_hold_s", "min_duration_s", "bytes_per_s"},
             source);
  device::DeviceConfig c;
  c.trigger_threshold = field_or<double>(j, "trigger_threshold", c.trigger_threshold, source);
  c.release_threshold = field_or<double>(j, "release_threshold", c.release_threshold, source);
  c.release_hold_s = field_or<double>(j, "release_hold_s", c.release_hold_s, source);
  c.min_duration_s = field_or<double>(j, "min_duration_s", c.min_duration_s, source);
  c.bytes_per_s = field_or<double>(j, "bytes_per_s", c.bytes_per_s, source);
  try {
    c.validate();
  } catch (const Error& e) {
    parse_fail(source, e.what());
  }
  return c;
}

std::string device_config_json(const device::DeviceConfig& c, bool pretty) {
  ojson j;
  j["trigger_threshold"] = c.trigger_threshold;
  j["release_threshold"] = c.release_threshold;
  j["release_hold_s"] = c.release_hold_s;
  j["min_duration_s"] = c.min_duration_s;
  j["bytes_per_s"] = c.bytes_per_s;
  return dump(j, pretty);
}

std::vector<device::DetectorEvent> read_events_jsonl(std::istream& in, const std::string& source) {
  std::vector<device::DetectorEvent> out;
  for_each_jsonl(in, source, [&](const json& j, const std::string& where) {
    check_keys(j, {"t", "hand_present", "interaction_score"}, where);
    device::DetectorEvent ev;
    ev.t = field<double>(j, "t", where);
    ev.hand_present = field<bool>(j, "hand_present", where);
    ev.interaction_score = field<double>(j, "interaction_score", where);
    if (!(ev.interaction_score >= 0.0 && ev.interaction_score <= 1.0)) {
      throw Error(ErrorCode::kParse, where + ": interaction_score outside [0, 1]");
    }
    out.push_back(ev);
  });
  return out;
}

void write_events_jsonl(std::ostream& out, const std::vector<device::DetectorEvent>& events) {
  for (const auto& e : events) {
    ojson j;
    j["t"] = e.t;
    j["hand_present"] = e.hand_present;
    j["interaction_score"] = e.interaction_score;
    out << j.dump() << '\n';
  }
}

// --- files and corpus ------------------------------------------------------

std::string read_text_file(const fs::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

void write_corpus(const fs::path& dir, const std::vector<synth::CorpusClip>& corpus,
                  const synth::CorpusRecipe& recipe) {
  fs::create_directories(dir);
  ojson manifest;
  manifest["recipe"] = {{"seed", recipe.seed},
                        {"n_clips", recipe.n_clips},
                        {"duration_s", recipe.duration_s},
                        {"fps", recipe.fps},
                        {"spike_fraction", recipe.spike_fraction},
                        {"spike_magnitude", recipe.spike_magnitude},
                        {"reproj_fraction", recipe.reproj_fraction},
                        {"reproj_offset_px", recipe.reproj_offset_px},
                        {"pixel_sigma_px", recipe.pixel_sigma_px}};
  ojson clips = ojson::array();
  for (const auto& c : corpus) {
    const auto sub = dir / c.clip.clip_id;
    fs::create_directories(sub);
    write_tum_file(sub / "trajectory.tum", c.clip.camera_traj);
    write_joints_file(sub / "hand_world.jsonl", c.clip.world_track.frames);
    std::vector<double> ts;
    for (const auto& f : c.clip.world_track.frames) ts.push_back(f.t);
    {
      auto out = open_out(sub / "observed.jsonl");
      write_pixels_jsonl(out, c.clip.observed, ts);
    }
    write_text_file(sub / "intrinsics.json", intrinsics_json(c.clip.intrinsics) + "\n");
    ojson entry;
    entry["id"] = c.clip.clip_id;
    entry["frame_rate"] = c.clip.world_track.frame_rate;
    entry["pixel_offset_px"] = c.pixel_offset_px;
    ojson spikes = ojson::array();
    for (const auto& s : c.spikes) {
      spikes.push_back({{"frame", s.frame},
                        {"magnitude", s.magnitude},
                        {"sigma_base", s.sigma_base},
                        {"velocity_frames", s.velocity_frames}});
    }
    entry["spikes"] = std::move(spikes);
    clips.push_back(std::move(entry));
  }
  manifest["clips"] = std::move(clips);
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<CorpusEntry> read_corpus(const fs::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) parse_fail(dir.string(), "missing manifest.json");
  const std::string src = manifest_path.string();
  const json m = parse_doc(read_text_file(manifest_path), src);
  if (!m.contains("clips") || !m.at("clips").is_array()) parse_fail(src, "'clips' must be an array");
  std::vector<CorpusEntry> out;
  std::set<std::string> seen;
  for (const auto& e : m.at("clips")) {
    CorpusEntry c;
    const auto id = field<std::string>(e, "id", src);
    if (id.empty() || id.find('/') != std::string::npos || id == "." || id == "..") {
      parse_fail(src, "bad clip id '" + id + "'");
    }
    if (!seen.insert(id).second) parse_fail(src, "duplicate clip id '" + id + "'");
    const auto sub = dir / id;
    for (const char* f : {"trajectory.tum", "hand_world.jsonl", "observed.jsonl", "intrinsics.json"}) {
      if (!fs::exists(sub / f)) parse_fail((sub / f).string(), "missing");
    }
    c.clip.clip_id = id;
    c.clip.camera_traj = read_tum_file(sub / "trajectory.tum");
    c.clip.world_track.frames = read_joints_file(sub / "hand_world.jsonl");
    c.clip.world_track.frame_rate = field_or<double>(e, "frame_rate", 30.0, src);
    c.clip.world_track.frame_of_reference = kinematics::FrameOfReference::kWorld;
    {
      auto in = open_in(sub / "observed.jsonl");
      c.clip.observed = read_pixels_jsonl(in, (sub / "observed.jsonl").string());
    }
    c.clip.intrinsics = parse_intrinsics(read_text_file(sub / "intrinsics.json"), (sub / "intrinsics.json").string());
    c.markers = field_or<std::string>(e, "markers", "", src);
    c.pixel_offset_px = field_or<double>(e, "pixel_offset_px", 0.0, src);
    if (e.contains("spikes")) {
      for (const auto& s : e.at("spikes")) {
        synth::SpikeRecord r;
        r.frame = field<std::size_t>(s, "frame", src);
        r.magnitude = field<double>(s, "magnitude", src);
        r.sigma_base = field_or<double>(s, "sigma_base", 0.0, src);
        r.velocity_frames = field_or<std::vector<std::size_t>>(s, "velocity_frames", {}, src);
        c.spikes.push_back(std::move(r));
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace egocollect::io
