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

#include "egocollect/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "egocollect/builtin_ops.hpp"
#include "egocollect/error.hpp"
#include "egocollect/io.hpp"
#include "json.hpp"

namespace egocollect::cli {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

Assertion Assertion::parse(const std::string& text) {
  static const char* kOps[] = {"<=", ">=", "==", "!=", "<", ">"};
  for (const char* op : kOps) {
    const auto pos = text.find(op);
    if (pos == std::string::npos || pos == 0) continue;
    Assertion a;
    a.field = text.substr(0, pos);
    a.op = op;
    const std::string rhs = text.substr(pos + std::strlen(op));
    char* end = nullptr;
    a.value = std::strtod(rhs.c_str(), &end);
    if (rhs.empty() || end != rhs.c_str() + rhs.size()) {
      throw Error(ErrorCode::kInvalidArgument, "assertion '" + text + "' needs a numeric right-hand side");
    }
    a.field.erase(a.field.find_last_not_of(' ') + 1);
    return a;
  }
  throw Error(ErrorCode::kInvalidArgument, "assertion '" + text + "' has no comparison operator");
}

bool Assertion::holds(double actual) const {
  if (op == "<=") return actual <= value;
  if (op == ">=") return actual >= value;
  if (op == "<") return actual < value;
  if (op == ">") return actual > value;
  if (op == "==") return actual == value;
  return actual != value;
}

namespace {

struct Result {
  std::string text;                            // exact stdout payload
  ojson doc;                                   // what assertions and --pretty read
  std::map<std::string, std::string> aliases;  // short assertion names -> dotted paths
};

struct Globals {
  std::uint64_t seed = 0;
  bool pretty = false;
  std::vector<std::string> asserts;
};

ojson reparse(const std::string& text) { return ojson::parse(text); }

const ojson* lookup(const ojson& doc, const std::string& path) {
  const ojson* cur = &doc;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    auto dot = path.find('.', pos);
    if (dot == std::string::npos) dot = path.size();
    const std::string key = path.substr(pos, dot - pos);
    if (cur->is_object()) {
      auto it = cur->find(key);
      if (it == cur->end()) return nullptr;
      cur = &*it;
    } else if (cur->is_array()) {
      char* end = nullptr;
      const auto idx = std::strtoul(key.c_str(), &end, 10);
      if (key.empty() || end != key.c_str() + key.size() || idx >= cur->size()) return nullptr;
      cur = &(*cur)[idx];
    } else {
      return nullptr;
    }
    pos = dot + 1;
  }
  return cur;
}

void flatten(const ojson& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    return;
  }
  if (j.is_array() && !j.empty() && (j.size() > 8 || j.front().is_structured())) {
    out << std::left << std::setw(48) << prefix << " [" << j.size() << " items]\n";
    return;
  }
  out << std::left << std::setw(48) << prefix << ' ' << j.dump() << '\n';
}

int finish(const Result& r, const Globals& g, std::ostream& out, std::ostream& err) {
  if (g.pretty) {
    flatten(r.doc, "", out);
  } else {
    out << r.text;
  }
  int status = kOk;
  for (const auto& text : g.asserts) {
    const auto a = Assertion::parse(text);
    std::string path = a.field;
    if (auto it = r.aliases.find(path); it != r.aliases.end()) path = it->second;
    const ojson* v = lookup(r.doc, path);
    if (!v || !(v->is_number() || v->is_boolean())) {
      err << "error: assertion field '" << a.field << "' is not a numeric report field\n";
      return kInputError;
    }
    const double actual = v->is_boolean() ? (v->get<bool>() ? 1.0 : 0.0) : v->get<double>();
    if (!a.holds(actual)) {
      err << "assertion failed: " << text << " (actual " << actual << ")\n";
      status = kAssertionFailed;
    }
  }
  return status;
}

// --- eval -------------------------------------------------------------------

struct EvalTrajArgs {
  std::string est, gt, alignment = "sim3";
  int rpe_delta = 1;
  std::optional<double> max_dt;
};

Result eval_traj(const EvalTrajArgs& a) {
  const auto est = io::read_tum_file(a.est);
  const auto gt = io::read_tum_file(a.gt);
  const auto report = metrics::evaluate_trajectory(est, gt, a.rpe_delta, a.max_dt);
  Result r;
  r.text = io::report_json(report) + "\n";
  r.doc = reparse(r.text);
  r.aliases = {{"ate", a.alignment == "se3" ? "ate_s_rmse_m" : "ate_rmse_m"},
               {"ate_s", "ate_s_rmse_m"},
               {"rpe_trans", "rpe_trans_rmse_m"},
               {"rpe_rot", "rpe_rot_rmse_deg"}};
  return r;
}

struct EvalHandArgs {
  std::string pred, gt;
  double auc_max_mm = 50.0;
  int auc_steps = 100;
};

Result eval_hand(const EvalHandArgs& a) {
  const auto pred = io::read_joints_file(a.pred);
  const auto gt = io::read_joints_file(a.gt);
  const auto report = metrics::evaluate_pose(pred, gt, a.auc_max_mm, a.auc_steps);
  Result r;
  r.text = io::report_json(report) + "\n";
  r.doc = reparse(r.text);
  r.aliases = {{"mpjpe", "mpjpe_mm"}, {"pa_mpjpe", "pa_mpjpe_mm"}};
  return r;
}

// --- qc ---------------------------------------------------------------------

struct QcArgs {
  std::string corpus;
  qc::QCThresholds thresholds;
  std::string pool_out;
};

Result qc_run(const QcArgs& a) {
  a.thresholds.validate();
  const auto corpus = io::read_corpus(a.corpus);
  qc::HardNegativePool pool;
  std::ostringstream out;
  std::size_t pass = 0, fail = 0, sampled = 0, vel = 0, rep = 0, mal = 0;
  for (const auto& e : corpus) {
    const auto v = qc::check_clip(e.clip, a.thresholds);
    out << io::verdict_json(v) << '\n';
    switch (v.outcome) {
      case qc::Outcome::kPass: ++pass; break;
      case qc::Outcome::kInspectSampled: ++sampled; break;
      case qc::Outcome::kFail:
        ++fail;
        pool.route_failed(v);
        break;
    }
    vel += v.has_reason(qc::ReasonKind::kVelocityOutlier);
    rep += v.has_reason(qc::ReasonKind::kReprojection);
    mal += v.has_reason(qc::ReasonKind::kMalformed);
  }
  ojson summary;
  summary["clips"] = corpus.size();
  summary["pass"] = pass;
  summary["fail"] = fail;
  summary["inspect_sampled"] = sampled;
  summary["velocity_outlier"] = vel;
  summary["reprojection"] = rep;
  summary["malformed"] = mal;
  ojson line;
  line["summary"] = summary;
  out << line.dump() << '\n';
  if (!a.pool_out.empty()) io::write_text_file(a.pool_out, io::pool_json(pool, true) + "\n");

  Result r;
  r.text = out.str();
  r.doc = line;
  for (const auto& [k, v] : summary.items()) r.aliases[k] = "summary." + k;
  return r;
}

// --- pipeline ---------------------------------------------------------------

struct PipelineArgs {
  std::string spec = "default";
  std::string inputs;
  int cpu_workers = 8;
  int gpu_workers = 2;
  double arrival_interval_s = 0.0;
  double tick_s = 1.0;
  std::vector<std::string> swaps;  // op=version@t
  qc::QCThresholds thresholds;
};

Result pipeline_run(const PipelineArgs& a, std::uint64_t seed) {
  pipeline::OperatorRegistry registry;
  pipeline::BuiltinOptions opts;
  opts.qc = a.thresholds;
  pipeline::register_builtin_operators(registry, opts);
  const auto spec = a.spec == "default" ? pipeline::default_pipeline_spec()
                                        : io::parse_pipeline_spec(io::read_text_file(a.spec), a.spec);
  std::vector<pipeline::ClipArtifact> inputs;
  for (auto& e : io::read_corpus(a.inputs)) inputs.push_back(pipeline::make_clip_artifact(e.clip, e.markers));

  pipeline::EngineConfig cfg;
  cfg.cpu_workers = a.cpu_workers;
  cfg.gpu_workers = a.gpu_workers;
  cfg.seed = seed;
  cfg.sample_tick_s = a.tick_s;
  cfg.arrival_interval_s = a.arrival_interval_s;
  cfg.record_trace = false;
  pipeline::Engine engine(registry, cfg);
  engine.start(spec, std::move(inputs));
  for (const auto& s : a.swaps) {
    const auto eq = s.find('=');
    const auto at = s.rfind('@');
    if (eq == std::string::npos || at == std::string::npos || at < eq) {
      throw Error(ErrorCode::kInvalidArgument, "--swap expects op=version@time, got '" + s + "'");
    }
    char* end = nullptr;
    const std::string ts = s.substr(at + 1);
    const double t = std::strtod(ts.c_str(), &end);
    if (ts.empty() || end != ts.c_str() + ts.size()) throw Error(ErrorCode::kInvalidArgument, "bad swap time in '" + s + "'");
    engine.schedule_hot_swap(t, s.substr(0, eq), s.substr(eq + 1, at - eq - 1));
  }
  auto res = engine.finish();

  ojson doc;
  doc["report"] = reparse(io::report_json(res.report));
  ojson outputs = ojson::array();
  for (const auto& o : res.outputs) outputs.push_back(o.clip_id);
  doc["outputs"] = std::move(outputs);
  doc["hard_negatives"] = reparse(io::pool_json(res.hard_negatives));
  ojson errors = ojson::array();
  for (const auto& e : res.error_bin) {
    errors.push_back({{"root_id", e.root_id}, {"clip_id", e.clip_id}, {"stage_id", e.stage_id},
                      {"op", e.op}, {"version", e.version}, {"message", e.message}});
  }
  doc["error_bin"] = std::move(errors);

  Result r;
  r.text = doc.dump() + "\n";
  r.doc = std::move(doc);
  r.aliases = {{"sink", "report.roots.sink"},         {"pool", "report.roots.pool"},
               {"error", "report.roots.error"},       {"inputs", "report.roots.inputs"},
               {"makespan", "report.makespan_s"},     {"throughput", "report.throughput_per_s"},
               {"sink_outputs", "report.sink_outputs"}};
  return r;
}

// --- fleet ------------------------------------------------------------------

struct FleetArgs {
  std::string scenario = synth::kPaperLatencyScenario;
  std::string routing;
  std::optional<double> duration_s;
  bool drain = false;
  std::string csv;
  std::string ingest;  // pipeline run output whose sink clips are uploaded
  double ingest_interval_s = 1.0;
};

// The scenario keeps its own seed unless --seed was given.
fleet::FleetScenario load_scenario(const std::string& name, const std::uint64_t* seed) {
  if (name == synth::kPaperLatencyScenario) {
    synth::ScenarioRecipe recipe;
    recipe.named = name;
    if (seed) recipe.seed = *seed;
    return synth::gen_fleet_topology(recipe);
  }
  auto sc = io::parse_scenario(io::read_text_file(name), name);
  if (seed) sc.seed = *seed;
  return sc;
}

Result fleet_sim(const FleetArgs& a, const std::uint64_t* seed) {
  auto sc = load_scenario(a.scenario, seed);
  if (!a.routing.empty()) sc.routing = fleet::routing_mode_from_string(a.routing);
  if (!a.ingest.empty()) {
    const auto doc = ojson::parse(io::read_text_file(a.ingest));
    if (!doc.contains("outputs") || !doc.at("outputs").is_array()) {
      throw Error(ErrorCode::kParse, a.ingest + ": expected a pipeline run report with 'outputs'");
    }
    if (sc.devices.empty()) throw Error(ErrorCode::kInvalidScenario, "scenario has no devices to upload from");
    std::size_t k = 0;
    for (const auto& id : doc.at("outputs")) {
      sc.uploads.push_back({static_cast<double>(k) * a.ingest_interval_s, k % sc.devices.size(), id.get<std::string>()});
      ++k;
    }
  }
  double duration = 0.0;
  if (a.duration_s) {
    duration = *a.duration_s;
  } else {
    for (const auto& w : sc.workload) duration = std::max(duration, w.end_s);
    for (const auto& u : sc.uploads) duration = std::max(duration, u.t_s + 1.0);
    if (duration == 0.0) duration = 600.0;
  }
  fleet::SimOptions opts;
  opts.drain = a.drain;
  const auto res = fleet::run(sc, duration, opts);
  if (!a.csv.empty()) io::write_text_file(a.csv, io::snapshots_csv(res.report));

  Result r;
  r.text = io::report_json(res.report) + "\n";
  r.doc = reparse(r.text);
  const std::string mode(fleet::to_string(sc.routing));
  for (const char* k : {"p50", "p95", "p99", "mean", "max"}) r.aliases[k] = "ingest_latency_ms." + mode + "." + k;
  r.aliases["ingested"] = "counts.ingested";
  r.aliases["replicated"] = "counts.replicated";
  r.aliases["spike_recovery"] = "spike_recovery_s";
  return r;
}

// --- synth ------------------------------------------------------------------

struct SynthArgs {
  std::string kind;
  std::string out;
  double duration_s = 10.0;
  double fps = 30.0;
  double pos_sigma_m = 0.0;
  double scale = 1.5;
  std::size_t n_clips = 100;
  double spike_fraction = 0.3;
  double reproj_fraction = 0.2;
  std::string named;
  int regions = 3;
  int devices = 30;
};

Result synth_gen(const SynthArgs& a, std::uint64_t seed) {
  const fs::path dir(a.out);
  fs::create_directories(dir);
  ojson files = ojson::array();
  if (a.kind == "traj") {
    const auto gt = synth::gen_trajectory(seed, a.duration_s, a.fps);
    // Estimate = fixed Sim(3) of gt plus optional position noise.
    geometry::Sim3Transform off{a.scale,
                                geometry::UnitQuaternion::from_axis_angle(geometry::Vec3(1, 2, 3).normalized(), 0.4),
                                geometry::Vec3(0.3, -0.2, 1.1)};
    metrics::Trajectory est = gt;
    for (auto& s : est.samples) {
      s.pose.translation = geometry::apply_sim3(off, s.pose.translation);
      s.pose.rotation = off.rotation * s.pose.rotation;
    }
    synth::NoiseModel noise;
    noise.pos_sigma_m = a.pos_sigma_m;
    est = synth::perturb_trajectory(est, noise, seed).data;
    io::write_tum_file(dir / "gt.tum", gt);
    io::write_tum_file(dir / "est.tum", est);
    files = {"gt.tum", "est.tum"};
  } else if (a.kind == "hand") {
    const auto traj = synth::gen_trajectory(seed, a.duration_s, a.fps);
    const auto hand = synth::gen_hand_track(traj, seed);
    synth::NoiseModel noise;
    noise.pos_sigma_m = a.pos_sigma_m;
    const auto pred = synth::perturb_track(hand.world, noise, seed);
    io::write_tum_file(dir / "trajectory.tum", traj);
    io::write_joints_file(dir / "gt_world.jsonl", hand.world.frames);
    io::write_joints_file(dir / "gt_camera.jsonl", hand.camera.frames);
    io::write_joints_file(dir / "pred.jsonl", pred.data.frames);
    std::vector<double> ts;
    for (const auto& f : hand.world.frames) ts.push_back(f.t);
    std::ofstream px(dir / "observed.jsonl", std::ios::binary);
    io::write_pixels_jsonl(px, hand.pixels, ts);
    io::write_text_file(dir / "intrinsics.json", io::intrinsics_json(synth::default_intrinsics()) + "\n");
    files = {"trajectory.tum", "gt_world.jsonl", "gt_camera.jsonl", "pred.jsonl", "observed.jsonl", "intrinsics.json"};
  } else if (a.kind == "corpus") {
    synth::CorpusRecipe recipe;
    recipe.seed = seed;
    recipe.n_clips = a.n_clips;
    recipe.fps = a.fps;
    recipe.spike_fraction = a.spike_fraction;
    recipe.reproj_fraction = a.reproj_fraction;
    io::write_corpus(dir, synth::gen_qc_corpus(recipe), recipe);
    files = {"manifest.json"};
  } else if (a.kind == "fleet") {
    synth::ScenarioRecipe recipe;
    recipe.seed = seed;
    recipe.named = a.named;
    recipe.n_regions = a.regions;
    recipe.n_devices = a.devices;
    io::write_text_file(dir / "scenario.json", io::scenario_json(synth::gen_fleet_topology(recipe)) + "\n");
    files = {"scenario.json"};
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown kind '" + a.kind + "'");
  }
  ojson doc;
  doc["kind"] = a.kind;
  doc["seed"] = seed;
  doc["files"] = std::move(files);
  Result r;
  r.text = doc.dump() + "\n";
  r.doc = std::move(doc);
  return r;
}

void add_qc_flags(CLI::App* sub, qc::QCThresholds& t) {
  sub->add_option("--sigma-k", t.sigma_k, "velocity outlier threshold in sigmas")->capture_default_str();
  sub->add_option("--reproj-px", t.reproj_px, "clip mean reprojection threshold")->capture_default_str();
  sub->add_option("--inspect-rate", t.inspect_rate, "fraction of passing clips sampled")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"egocollect: evaluation, QC, pipeline, fleet simulation and synthetic data"};
  app.name("egocollect");
  app.require_subcommand(1);
  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "seed for every stochastic command");
  app.add_flag("--pretty", g.pretty, "human-readable table instead of JSON");
  app.add_option("--assert", g.asserts, "field<op>value check over the report; exit 3 on violation");

  auto* eval = app.add_subcommand("eval", "trajectory and hand metrics");
  eval->require_subcommand(1);
  EvalTrajArgs traj;
  auto* ev_traj = eval->add_subcommand("traj", "ATE / ATE-S / RPE of a TUM trajectory");
  ev_traj->add_option("--est", traj.est, "estimated trajectory (TUM)")->required();
  ev_traj->add_option("--gt", traj.gt, "ground truth trajectory (TUM)")->required();
  ev_traj->add_option("--alignment", traj.alignment, "alignment named by the 'ate' assertion field")
      ->check(CLI::IsMember({"sim3", "se3"}))
      ->capture_default_str();
  ev_traj->add_option("--rpe-delta", traj.rpe_delta, "RPE step in frames")->capture_default_str();
  ev_traj->add_option("--max-dt", traj.max_dt, "association tolerance in seconds");
  EvalHandArgs hand;
  auto* ev_hand = eval->add_subcommand("hand", "MPJPE / PA-MPJPE / PCK AUC of joint sequences");
  ev_hand->add_option("--pred", hand.pred, "predicted joints (JSON Lines)")->required();
  ev_hand->add_option("--gt", hand.gt, "ground truth joints (JSON Lines)")->required();
  ev_hand->add_option("--auc-max-mm", hand.auc_max_mm)->capture_default_str();
  ev_hand->add_option("--auc-steps", hand.auc_steps)->capture_default_str();

  auto* qcmd = app.add_subcommand("qc", "quality control");
  qcmd->require_subcommand(1);
  QcArgs qa;
  auto* qc_run_cmd = qcmd->add_subcommand("run", "check every clip of a corpus directory");
  qc_run_cmd->add_option("--corpus", qa.corpus, "corpus directory")->required();
  qc_run_cmd->add_option("--pool-out", qa.pool_out, "write the hard-negative pool as JSON");
  add_qc_flags(qc_run_cmd, qa.thresholds);

  auto* pcmd = app.add_subcommand("pipeline", "DAG pipeline engine");
  pcmd->require_subcommand(1);
  PipelineArgs pa;
  auto* p_run = pcmd->add_subcommand("run", "run a pipeline spec over a corpus on the simulated clock");
  p_run->add_option("--spec", pa.spec, "pipeline spec JSON, or 'default'")->capture_default_str();
  p_run->add_option("--inputs", pa.inputs, "corpus directory")->required();
  p_run->add_option("--cpu-workers", pa.cpu_workers)->capture_default_str();
  p_run->add_option("--gpu-workers", pa.gpu_workers)->capture_default_str();
  p_run->add_option("--arrival-interval", pa.arrival_interval_s)->capture_default_str();
  p_run->add_option("--tick", pa.tick_s, "queue-depth sampling period")->capture_default_str();
  p_run->add_option("--swap", pa.swaps, "hot swap op=version@time");
  add_qc_flags(p_run, pa.thresholds);

  auto* fcmd = app.add_subcommand("fleet", "fleet ingestion simulator");
  fcmd->require_subcommand(1);
  FleetArgs fa;
  auto* f_sim = fcmd->add_subcommand("sim", "run a scenario");
  f_sim->add_option("--scenario", fa.scenario, "'paper-latency' or a scenario JSON file")->capture_default_str();
  f_sim->add_option("--routing", fa.routing, "centralized | geo_dns | geo_dns_plus_probes (geo, probes)");
  f_sim->add_option("--duration", fa.duration_s, "simulated seconds");
  f_sim->add_flag("--drain", fa.drain, "replicate past the duration until quiescent");
  f_sim->add_option("--csv", fa.csv, "write snapshot time series as CSV");
  f_sim->add_option("--ingest", fa.ingest, "pipeline run output whose sink clips are uploaded");
  f_sim->add_option("--ingest-interval", fa.ingest_interval_s)->capture_default_str();

  auto* scmd = app.add_subcommand("synth", "synthetic ground truth");
  scmd->require_subcommand(1);
  SynthArgs sa;
  auto* s_gen = scmd->add_subcommand("gen", "generate fixtures");
  s_gen->add_option("--kind", sa.kind)->required()->check(CLI::IsMember({"traj", "hand", "corpus", "fleet"}));
  s_gen->add_option("--out", sa.out, "output directory")->required();
  s_gen->add_option("--duration", sa.duration_s)->capture_default_str();
  s_gen->add_option("--fps", sa.fps)->capture_default_str();
  s_gen->add_option("--pos-sigma", sa.pos_sigma_m, "position noise of the estimate (m)")->capture_default_str();
  s_gen->add_option("--scale", sa.scale, "Sim(3) scale between gt and estimate (traj)")->capture_default_str();
  s_gen->add_option("--n-clips", sa.n_clips)->capture_default_str();
  s_gen->add_option("--spike-fraction", sa.spike_fraction)->capture_default_str();
  s_gen->add_option("--reproj-fraction", sa.reproj_fraction)->capture_default_str();
  s_gen->add_option("--named", sa.named, "named fleet topology, e.g. paper-latency");
  s_gen->add_option("--regions", sa.regions)->capture_default_str();
  s_gen->add_option("--devices", sa.devices)->capture_default_str();

  for (auto* sub : {eval, ev_traj, ev_hand, qcmd, qc_run_cmd, pcmd, p_run, fcmd, f_sim, scmd, s_gen}) {
    sub->fallthrough();
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    for (const auto& a : g.asserts) Assertion::parse(a);
    const std::uint64_t* seed = seed_opt->count() ? &g.seed : nullptr;
    Result r;
    if (ev_traj->parsed()) r = eval_traj(traj);
    else if (ev_hand->parsed()) r = eval_hand(hand);
    else if (qc_run_cmd->parsed()) r = qc_run(qa);
    else if (p_run->parsed()) r = pipeline_run(pa, g.seed);
    else if (f_sim->parsed()) r = fleet_sim(fa, seed);
    else if (s_gen->parsed()) r = synth_gen(sa, g.seed);
    else {
      err << app.help();
      return kInputError;
    }
    return finish(r, g, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace egocollect::cli
