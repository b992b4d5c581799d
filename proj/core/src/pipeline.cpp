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

#include "egocollect/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <random>
#include <set>

#include "egocollect/error.hpp"

namespace egocollect::pipeline {

namespace {

int parse_component(std::string_view s, std::string_view whole) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || p != end || v < 0) {
    throw Error(ErrorCode::kInvalidArgument, "bad version '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

SemVer SemVer::parse(std::string_view text) {
  std::string_view s = text;
  if (!s.empty() && (s.front() == 'v' || s.front() == 'V')) s.remove_prefix(1);
  SemVer out;
  if (auto dash = s.find('-'); dash != std::string_view::npos) {
    out.prerelease = std::string(s.substr(dash + 1));
    if (out.prerelease.empty()) throw Error(ErrorCode::kInvalidArgument, "bad version '" + std::string(text) + "'");
    s = s.substr(0, dash);
  }
  int* parts[3] = {&out.major, &out.minor, &out.patch};
  for (int i = 0; i < 3; ++i) {
    const auto dot = s.find('.');
    *parts[i] = parse_component(s.substr(0, dot), text);
    if (dot == std::string_view::npos) {
      s = {};
      break;
    }
    s = s.substr(dot + 1);
    if (i == 2) throw Error(ErrorCode::kInvalidArgument, "bad version '" + std::string(text) + "'");
  }
  return out;
}

std::string SemVer::str() const {
  std::string s = std::to_string(major) + "." + std::to_string(minor) + "." + std::to_string(patch);
  if (!prerelease.empty()) s += "-" + prerelease;
  return s;
}

std::strong_ordering operator<=>(const SemVer& a, const SemVer& b) {
  if (auto c = a.major <=> b.major; c != 0) return c;
  if (auto c = a.minor <=> b.minor; c != 0) return c;
  if (auto c = a.patch <=> b.patch; c != 0) return c;
  if (a.prerelease.empty() != b.prerelease.empty()) {
    return a.prerelease.empty() ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return a.prerelease <=> b.prerelease;
}

OpResult OpResult::emit(ClipArtifact a) {
  OpResult r;
  r.outputs.push_back(std::move(a));
  return r;
}

OpResult OpResult::reject(qc::QCVerdict v) {
  OpResult r;
  r.rejected = std::move(v);
  return r;
}

OpResult OpResult::fail(std::string message) {
  OpResult r;
  r.error = std::move(message);
  return r;
}

void OperatorSpec::validate() const {
  if (name.empty()) throw Error(ErrorCode::kInvalidArgument, "operator name is empty");
  if (input_kind.empty() || output_kind.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "operator " + name + " has an empty kind");
  }
  if (!(mean_service_s >= 0.0) || !(dispersion >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "operator " + name + " has a negative cost model");
  }
  SemVer::parse(version);
}

void OperatorRegistry::register_operator(OperatorSpec spec, OperatorFn fn) {
  spec.validate();
  if (!fn) throw Error(ErrorCode::kInvalidArgument, "operator " + spec.name + " has no implementation");
  const auto v = SemVer::parse(spec.version);
  spec.version = v.str();
  auto& list = ops_[spec.name];
  for (const auto& r : list) {
    if (r.semver == v) {
      throw Error(ErrorCode::kDuplicateVersion, spec.name + "@" + spec.version + " already registered");
    }
  }
  list.push_back({std::move(spec), v, std::move(fn)});
  std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.semver < b.semver; });
}

bool OperatorRegistry::has(std::string_view name) const { return ops_.find(name) != ops_.end(); }

bool OperatorRegistry::has(std::string_view name, std::string_view version) const {
  try {
    return find(name, SemVer::parse(version)) != nullptr;
  } catch (const Error&) {
    return false;
  }
}

std::vector<std::string> OperatorRegistry::versions(std::string_view name) const {
  std::vector<std::string> out;
  if (auto it = ops_.find(name); it != ops_.end()) {
    for (const auto& r : it->second) out.push_back(r.spec.version);
  }
  return out;
}

const RegisteredOperator* OperatorRegistry::find(std::string_view name, const SemVer& v) const {
  auto it = ops_.find(name);
  if (it == ops_.end()) return nullptr;
  for (const auto& r : it->second) {
    if (r.semver == v) return &r;
  }
  return nullptr;
}

const RegisteredOperator& OperatorRegistry::resolve(std::string_view name,
                                                    const std::optional<std::string>& pinned) const {
  auto it = ops_.find(name);
  if (it == ops_.end() || it->second.empty()) {
    throw Error(ErrorCode::kUnknownOperator, "operator '" + std::string(name) + "' is not registered");
  }
  if (pinned) {
    SemVer v;
    try {
      v = SemVer::parse(*pinned);
    } catch (const Error&) {
      throw Error(ErrorCode::kUnknownVersion, std::string(name) + "@" + *pinned);
    }
    if (const auto* r = find(name, v)) return *r;
    throw Error(ErrorCode::kUnknownVersion, std::string(name) + "@" + *pinned + " is not registered");
  }
  if (auto o = overrides_.find(name); o != overrides_.end()) {
    if (const auto* r = find(name, o->second)) return *r;
  }
  return it->second.back();
}

void OperatorRegistry::set_active(const std::string& name, const std::string& version) {
  const auto v = SemVer::parse(version);
  if (!has(name)) throw Error(ErrorCode::kUnknownOperator, "operator '" + name + "' is not registered");
  if (!find(name, v)) throw Error(ErrorCode::kUnknownVersion, name + "@" + version + " is not registered");
  overrides_[name] = v;
}

std::optional<std::string> OperatorRegistry::active_override(std::string_view name) const {
  if (auto o = overrides_.find(name); o != overrides_.end()) return o->second.str();
  return std::nullopt;
}

std::string_view to_string(SpecErrorKind kind) {
  switch (kind) {
    case SpecErrorKind::kEmpty: return "EMPTY";
    case SpecErrorKind::kDuplicateStage: return "DUPLICATE_STAGE";
    case SpecErrorKind::kDanglingEdge: return "DANGLING_EDGE";
    case SpecErrorKind::kSelfLoop: return "SELF_LOOP";
    case SpecErrorKind::kCycle: return "CYCLE";
    case SpecErrorKind::kUnknownOperator: return "UNKNOWN_OPERATOR";
    case SpecErrorKind::kUnknownVersion: return "UNKNOWN_VERSION";
    case SpecErrorKind::kKindMismatch: return "KIND_MISMATCH";
    case SpecErrorKind::kNoSource: return "NO_SOURCE";
    case SpecErrorKind::kNoSink: return "NO_SINK";
    case SpecErrorKind::kBadRetries: return "BAD_RETRIES";
  }
  return "?";
}

namespace {

struct Graph {
  std::vector<std::vector<std::size_t>> succ, pred;
};

// Indexes stages by id; edges with unknown endpoints or duplicated ids are skipped.
Graph build_graph(const PipelineSpec& spec, const std::map<std::string, std::size_t>& index) {
  Graph g;
  g.succ.resize(spec.stages.size());
  g.pred.resize(spec.stages.size());
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [a, b] : spec.edges) {
    auto ia = index.find(a);
    auto ib = index.find(b);
    if (ia == index.end() || ib == index.end() || ia->second == ib->second) continue;
    if (!seen.insert({ia->second, ib->second}).second) continue;
    g.succ[ia->second].push_back(ib->second);
    g.pred[ib->second].push_back(ia->second);
  }
  return g;
}

// Kahn order; returns fewer than n stages when there is a cycle.
std::vector<std::size_t> kahn(const Graph& g) {
  const std::size_t n = g.succ.size();
  std::vector<std::size_t> indeg(n);
  for (std::size_t i = 0; i < n; ++i) indeg[i] = g.pred[i].size();
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indeg[i] == 0) ready.insert(i);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const std::size_t v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (std::size_t w : g.succ[v]) {
      if (--indeg[w] == 0) ready.insert(w);
    }
  }
  return order;
}

// Stages that lie on some cycle: strongly connected components of size > 1.
std::vector<std::vector<std::size_t>> cyclic_components(const Graph& g) {
  const std::size_t n = g.succ.size();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  int counter = 0;
  std::function<void(std::size_t)> strong = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : g.succ[v]) {
      if (index[w] < 0) {
        strong(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      if (comp.size() > 1) {
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] < 0) strong(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<SpecError> validate_spec(const PipelineSpec& spec, const OperatorRegistry& registry) {
  std::vector<SpecError> errors;
  auto add = [&](SpecErrorKind kind, std::vector<std::string> stages, std::string msg) {
    errors.push_back({kind, std::move(stages), std::move(msg)});
  };
  if (spec.stages.empty()) {
    add(SpecErrorKind::kEmpty, {}, "pipeline has no stages");
    return errors;
  }
  if (spec.retries < 0) add(SpecErrorKind::kBadRetries, {}, "retries must be >= 0");

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < spec.stages.size(); ++i) {
    const auto& id = spec.stages[i].id;
    if (id.empty()) {
      add(SpecErrorKind::kDuplicateStage, {id}, "stage id is empty");
    } else if (!index.emplace(id, i).second) {
      add(SpecErrorKind::kDuplicateStage, {id}, "stage id '" + id + "' declared twice");
    }
  }
  for (const auto& [a, b] : spec.edges) {
    const bool ka = index.count(a) > 0;
    const bool kb = index.count(b) > 0;
    if (!ka || !kb) {
      add(SpecErrorKind::kDanglingEdge, {a, b},
          "edge " + a + " -> " + b + " references unknown stage " + (ka ? b : a));
    } else if (a == b) {
      add(SpecErrorKind::kSelfLoop, {a}, "stage " + a + " feeds itself");
    }
  }

  const Graph g = build_graph(spec, index);
  for (const auto& comp : cyclic_components(g)) {
    std::vector<std::string> ids;
    for (std::size_t v : comp) ids.push_back(spec.stages[v].id);
    std::string msg = "cycle through";
    for (const auto& id : ids) msg += " " + id;
    add(SpecErrorKind::kCycle, std::move(ids), std::move(msg));
  }

  std::vector<const RegisteredOperator*> resolved(spec.stages.size(), nullptr);
  for (std::size_t i = 0; i < spec.stages.size(); ++i) {
    const auto& st = spec.stages[i];
    try {
      resolved[i] = &registry.resolve(st.op, st.version);
    } catch (const Error& e) {
      add(e.code() == ErrorCode::kUnknownOperator ? SpecErrorKind::kUnknownOperator
                                                  : SpecErrorKind::kUnknownVersion,
          {st.id}, e.what());
    }
  }
  for (std::size_t a = 0; a < g.succ.size(); ++a) {
    for (std::size_t b : g.succ[a]) {
      if (!resolved[a] || !resolved[b]) continue;
      if (resolved[a]->spec.output_kind != resolved[b]->spec.input_kind) {
        add(SpecErrorKind::kKindMismatch, {spec.stages[a].id, spec.stages[b].id},
            spec.stages[a].id + " emits '" + resolved[a]->spec.output_kind + "' but " + spec.stages[b].id +
                " expects '" + resolved[b]->spec.input_kind + "'");
      }
    }
  }
  bool any_source = false, any_sink = false;
  for (std::size_t i = 0; i < g.succ.size(); ++i) {
    any_source |= g.pred[i].empty();
    any_sink |= g.succ[i].empty();
  }
  if (!any_source) add(SpecErrorKind::kNoSource, {}, "no stage without inputs");
  if (!any_sink) add(SpecErrorKind::kNoSink, {}, "no stage without outputs");
  return errors;
}

std::vector<std::string> topological_order(const PipelineSpec& spec) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < spec.stages.size(); ++i) index.emplace(spec.stages[i].id, i);
  const auto order = kahn(build_graph(spec, index));
  if (order.size() != spec.stages.size()) throw Error(ErrorCode::kInvalidSpec, "pipeline has a cycle");
  std::vector<std::string> out;
  for (std::size_t v : order) out.push_back(spec.stages[v].id);
  return out;
}

// ---------------------------------------------------------------------------

class Engine::Impl {
 public:
  Impl(OperatorRegistry& registry, EngineConfig config) : registry_(registry), config_(config), rng_(config.seed) {
    if (config_.cpu_workers < 0 || config_.gpu_workers < 0) {
      throw Error(ErrorCode::kInvalidArgument, "worker counts must be >= 0");
    }
    if (!(config_.sample_tick_s > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sample_tick_s must be > 0");
    if (!(config_.arrival_interval_s >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "arrival_interval_s must be >= 0");
    }
  }

  void start(const PipelineSpec& spec, std::vector<ClipArtifact> inputs) {
    if (running_) throw Error(ErrorCode::kInvalidArgument, "engine already running");
    if (auto errs = validate_spec(spec, registry_); !errs.empty()) {
      std::string msg = "pipeline spec rejected:";
      for (const auto& e : errs) msg += " [" + std::string(to_string(e.kind)) + "] " + e.message + ";";
      throw Error(ErrorCode::kInvalidSpec, msg);
    }
    spec_ = spec;
    const std::size_t n = spec_.stages.size();
    for (std::size_t i = 0; i < n; ++i) index_[spec_.stages[i].id] = i;
    graph_ = build_graph(spec_, index_);
    rank_.assign(n, 0);
    const auto order = kahn(graph_);
    for (std::size_t r = 0; r < order.size(); ++r) rank_[order[r]] = r;
    queues_.assign(n, {});
    joins_.assign(n, {});
    stage_latency_.assign(n, {});
    for (const auto& st : spec_.stages) result_.report.stages[st.id];
    pool_busy_[ResourceClass::kCpu].assign(static_cast<std::size_t>(config_.cpu_workers), false);
    pool_busy_[ResourceClass::kGpu].assign(static_cast<std::size_t>(config_.gpu_workers), false);
    rr_[ResourceClass::kCpu] = n - 1;
    rr_[ResourceClass::kGpu] = n - 1;
    for (std::size_t i = 0; i < n; ++i) check_pool(stage_op(i).spec.resource_class, spec_.stages[i].id);

    inputs_ = std::move(inputs);
    std::set<std::string> ids;
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      auto& a = inputs_[i];
      if (a.root_id.empty()) a.root_id = a.clip_id;
      if (!ids.insert(a.root_id).second) {
        throw Error(ErrorCode::kInvalidArgument, "duplicate input id '" + a.root_id + "'");
      }
      roots_[a.root_id].arrival = static_cast<double>(i) * config_.arrival_interval_s;
      push(roots_[a.root_id].arrival, kArrival, i);
    }
    result_.report.roots.inputs = inputs_.size();
    running_ = true;
  }

  void advance_until(double t) {
    require_running();
    while (!events_.empty() && events_.top().t <= t) {
      const double et = events_.top().t;
      sample_before(et);
      now_ = et;
      while (!events_.empty() && events_.top().t == et) {
        const Event ev = events_.top();
        events_.pop();
        handle(ev);
      }
      schedule();
    }
    if (t > now_ && std::isfinite(t)) {
      sample_before(t);
      now_ = t;
    }
  }

  RunResult finish(std::optional<double> stop_at) {
    require_running();
    advance_until(stop_at.value_or(std::numeric_limits<double>::infinity()));
    if (!stop_at) {
      // Joins that can no longer complete: some branch never delivered.
      for (std::size_t s = 0; s < joins_.size(); ++s) {
        for (auto& [clip, slots] : joins_[s]) {
          for (auto& slot : slots) {
            if (!slot) continue;
            to_error(*slot, s, stage_op(s), "join incomplete: not every upstream branch delivered");
            break;
          }
        }
        joins_[s].clear();
      }
    }
    const double end = now_;
    sample_through(end);

    auto& rep = result_.report;
    rep.makespan_s = end;
    rep.sink_outputs = result_.outputs.size();
    rep.throughput_per_s = end > 0.0 ? static_cast<double>(rep.sink_outputs) / end : 0.0;
    std::vector<double> e2e;
    for (const auto& a : result_.outputs) e2e.push_back(a.lineage.empty() ? 0.0 : a.lineage.back().completed_at - roots_[a.root_id].arrival);
    rep.end_to_end_s = summarize(std::move(e2e));
    for (std::size_t s = 0; s < spec_.stages.size(); ++s) {
      rep.stages[spec_.stages[s].id].latency_s = summarize(stage_latency_[s]);
    }

    std::set<std::string> live;
    for (const auto& q : queues_) for (const auto& it : q) live.insert(it.art.root_id);
    for (const auto& j : joins_) for (const auto& [clip, slots] : j) for (const auto& sl : slots) if (sl) live.insert(sl->root_id);
    for (const auto& [id, job] : jobs_) live.insert(job.item.art.root_id);
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      const auto& root = inputs_[i].root_id;
      const auto& st = roots_[root];
      if (st.error) ++rep.roots.error;
      else if (st.pool) ++rep.roots.pool;
      else if (live.count(root) || !st.arrived) ++rep.roots.in_flight;
      else if (st.sink) ++rep.roots.sink;
      else ++rep.roots.error;  // consumed without any terminal outcome; cannot happen
    }

    for (auto& [rc, busy] : busy_s_) {
      for (const auto& [id, job] : jobs_) {
        if (job.pool == rc) busy += now_ - job.dispatched_at;
      }
    }
    for (ResourceClass rc : {ResourceClass::kCpu, ResourceClass::kGpu}) {
      const double cap = static_cast<double>(pool_busy_[rc].size()) * end;
      rep.utilization[rc] = cap > 0.0 ? busy_s_[rc] / cap : 0.0;
    }
    running_ = false;
    return std::move(result_);
  }

  SwapReceipt hot_swap(const std::string& op, const std::string& version) {
    require_running();
    if (!registry_.has(op)) throw Error(ErrorCode::kUnknownOperator, "operator '" + op + "' is not registered");
    if (!registry_.has(op, version)) throw Error(ErrorCode::kUnknownVersion, op + "@" + version + " is not registered");
    const auto& current = registry_.resolve(op);
    const auto& next = registry_.resolve(op, version);
    if (next.spec.input_kind != current.spec.input_kind || next.spec.output_kind != current.spec.output_kind) {
      throw Error(ErrorCode::kIncompatibleVersion,
                  op + "@" + next.spec.version + " changes the operator's kinds");
    }
    check_pool(next.spec.resource_class, op);

    SwapReceipt rec;
    rec.op = op;
    rec.old_version = current.spec.version;
    rec.new_version = next.spec.version;
    rec.swap_time = now_;
    for (const auto& [id, job] : jobs_) {
      const auto& st = spec_.stages[job.stage];
      if (st.op == op && !st.version && job.version == current.spec.version) ++rec.in_flight_count;
    }
    rec.noop = rec.old_version == rec.new_version;
    registry_.set_active(op, next.spec.version);
    result_.report.swaps.push_back(rec);
    return rec;
  }

  void schedule_hot_swap(double t, const std::string& op, const std::string& version) {
    require_running();
    if (t < now_) throw Error(ErrorCode::kInvalidArgument, "cannot schedule a swap in the past");
    swaps_.push_back({op, version});
    push(t, kSwap, swaps_.size() - 1);
  }

  double now() const { return now_; }
  bool running() const { return running_; }

 private:
  enum Kind : int { kSwap = 0, kComplete = 1, kArrival = 2 };

  struct Event {
    double t;
    int kind;
    std::uint64_t seq;
    std::size_t ref;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.t != b.t) return a.t > b.t;
      if (a.kind != b.kind) return a.kind > b.kind;
      return a.seq > b.seq;
    }
  };
  struct Item {
    ClipArtifact art;
    double enqueued_at = 0.0;
    int attempts = 0;
  };
  struct Job {
    std::size_t stage = 0;
    ResourceClass pool = ResourceClass::kCpu;
    int worker = 0;
    Item item;
    std::string version;
    double dispatched_at = 0.0;
    OpResult result;
    const RegisteredOperator* op = nullptr;
  };
  struct RootState {
    double arrival = 0.0;
    bool arrived = false, sink = false, pool = false, error = false;
  };

  void require_running() const {
    if (!running_) throw Error(ErrorCode::kInvalidArgument, "engine is not running");
  }

  void check_pool(ResourceClass rc, const std::string& who) {
    if (pool_busy_[rc].empty()) {
      throw Error(ErrorCode::kInvalidSpec,
                  who + " needs a " + std::string(to_string(rc)) + " worker but that pool is empty");
    }
  }

  const RegisteredOperator& stage_op(std::size_t s) const {
    return registry_.resolve(spec_.stages[s].op, spec_.stages[s].version);
  }

  void push(double t, int kind, std::size_t ref) { events_.push({t, kind, seq_++, ref}); }

  void sample_before(double t) {
    while (next_sample_ < t) {
      record_sample(next_sample_);
      next_sample_ += config_.sample_tick_s;
    }
  }
  void sample_through(double t) {
    while (next_sample_ <= t) {
      record_sample(next_sample_);
      next_sample_ += config_.sample_tick_s;
    }
  }
  void record_sample(double t) {
    result_.report.series_t.push_back(t);
    for (std::size_t s = 0; s < queues_.size(); ++s) {
      result_.report.stages[spec_.stages[s].id].queue_depth.push_back(queues_[s].size());
    }
  }

  void handle(const Event& ev) {
    switch (ev.kind) {
      case kSwap: hot_swap(swaps_[ev.ref].first, swaps_[ev.ref].second); break;
      case kComplete: complete(ev.ref); break;
      case kArrival: arrive(ev.ref); break;
    }
  }

  void arrive(std::size_t i) {
    const auto& input = inputs_[i];
    roots_[input.root_id].arrived = true;
    for (std::size_t s = 0; s < spec_.stages.size(); ++s) {
      if (!graph_.pred[s].empty()) continue;
      ClipArtifact a = input;
      const auto& op = stage_op(s);
      if (a.kind != op.spec.input_kind) {
        to_error(a, s, op, "input kind '" + a.kind + "' does not match '" + op.spec.input_kind + "'");
        continue;
      }
      queues_[s].push_back({std::move(a), now_, 0});
    }
  }

  void schedule() {
    for (ResourceClass rc : {ResourceClass::kCpu, ResourceClass::kGpu}) {
      auto& busy = pool_busy_[rc];
      const std::size_t n = spec_.stages.size();
      for (;;) {
        auto idle = std::find(busy.begin(), busy.end(), false);
        if (idle == busy.end()) break;
        std::optional<std::size_t> pick;
        for (std::size_t k = 1; k <= n; ++k) {
          const std::size_t s = (rr_[rc] + k) % n;
          if (!queues_[s].empty() && stage_op(s).spec.resource_class == rc) {
            pick = s;
            break;
          }
        }
        if (!pick) break;
        rr_[rc] = *pick;
        dispatch(*pick, rc, static_cast<int>(idle - busy.begin()));
      }
    }
  }

  void dispatch(std::size_t s, ResourceClass rc, int worker) {
    Item item = std::move(queues_[s].front());
    queues_[s].pop_front();
    const auto& op = stage_op(s);
    const auto& st = spec_.stages[s];

    std::normal_distribution<double> z(0.0, 1.0);
    const double sigma = op.spec.dispersion;
    const double service = op.spec.mean_service_s * std::exp(sigma * z(rng_) - 0.5 * sigma * sigma);

    OpContext ctx{st.id, op.spec.version, now_,
                  config_.seed ^ qc::stable_hash(item.art.clip_id) ^ (qc::stable_hash(st.id) << 1)};
    OpResult res;
    try {
      res = op.fn(item.art, ctx);
    } catch (const std::exception& e) {
      res = OpResult::fail(e.what());
    }

    pool_busy_[rc][static_cast<std::size_t>(worker)] = true;
    auto& sr = result_.report.stages[st.id];
    ++sr.dispatched;
    ++sr.version_counts[op.spec.version];
    if (config_.record_trace) {
      result_.trace.push_back({now_, st.id, op.spec.name, op.spec.version, rc, worker, item.art.clip_id});
    }
    const std::size_t id = next_job_++;
    jobs_.emplace(id, Job{s, rc, worker, std::move(item), op.spec.version, now_, std::move(res), &op});
    push(now_ + service, kComplete, id);
  }

  void complete(std::size_t id) {
    auto node = jobs_.extract(id);
    Job& job = node.mapped();
    pool_busy_[job.pool][static_cast<std::size_t>(job.worker)] = false;
    busy_s_[job.pool] += now_ - job.dispatched_at;
    const std::size_t s = job.stage;
    ++result_.report.stages[spec_.stages[s].id].completed;
    stage_latency_[s].push_back(now_ - job.item.enqueued_at);

    const auto& op = *job.op;
    auto& res = job.result;
    if (!res.error && !res.rejected && res.outputs.empty()) res.error = "operator emitted nothing";
    if (res.error) {
      if (job.item.attempts < spec_.retries) {
        ++job.item.attempts;
        job.item.enqueued_at = now_;
        queues_[s].push_back(std::move(job.item));
      } else {
        to_error(job.item.art, s, op, *res.error);
      }
      return;
    }
    if (res.rejected) {
      try {
        result_.hard_negatives.route_failed(*res.rejected, now_);
        roots_[job.item.art.root_id].pool = true;
      } catch (const Error& e) {
        to_error(job.item.art, s, op, e.what());
      }
    }
    const LineageEntry entry{op.spec.name, job.version, spec_.stages[s].id, job.dispatched_at, now_};
    for (auto& out : res.outputs) {
      out.root_id = job.item.art.root_id;
      out.kind = op.spec.output_kind;
      out.lineage = job.item.art.lineage;
      out.lineage.push_back(entry);
      forward(s, std::move(out));
    }
  }

  void forward(std::size_t s, ClipArtifact art) {
    if (graph_.succ[s].empty()) {
      roots_[art.root_id].sink = true;
      result_.outputs.push_back(std::move(art));
      return;
    }
    const auto& succ = graph_.succ[s];
    for (std::size_t k = 0; k < succ.size(); ++k) {
      deliver(succ[k], s, k + 1 == succ.size() ? std::move(art) : art);
    }
  }

  void deliver(std::size_t d, std::size_t from, ClipArtifact art) {
    const auto& preds = graph_.pred[d];
    if (preds.size() <= 1) {
      queues_[d].push_back({std::move(art), now_, 0});
      return;
    }
    const auto slot = static_cast<std::size_t>(std::find(preds.begin(), preds.end(), from) - preds.begin());
    auto& slots = joins_[d][art.clip_id];
    if (slots.empty()) slots.resize(preds.size());
    if (slots[slot]) {
      to_error(art, d, stage_op(d), "duplicate join input from " + spec_.stages[from].id);
      return;
    }
    slots[slot] = std::move(art);
    if (std::any_of(slots.begin(), slots.end(), [](const auto& x) { return !x.has_value(); })) return;

    ClipArtifact merged = std::move(*slots.front());
    std::set<std::string> stages_seen;
    for (const auto& e : merged.lineage) stages_seen.insert(e.stage_id);
    for (std::size_t k = 1; k < slots.size(); ++k) {
      for (auto& e : slots[k]->lineage) {
        if (stages_seen.insert(e.stage_id).second) merged.lineage.push_back(std::move(e));
      }
      for (auto& [key, value] : slots[k]->tags) merged.tags.emplace(key, value);
    }
    std::stable_sort(merged.lineage.begin(), merged.lineage.end(), [this](const auto& a, const auto& b) {
      return rank_[index_.at(a.stage_id)] < rank_[index_.at(b.stage_id)];
    });
    joins_[d].erase(merged.clip_id);
    queues_[d].push_back({std::move(merged), now_, 0});
  }

  void to_error(const ClipArtifact& art, std::size_t s, const RegisteredOperator& op, const std::string& msg) {
    roots_[art.root_id].error = true;
    result_.error_bin.push_back({art.root_id, art.clip_id, spec_.stages[s].id, op.spec.name, op.spec.version, msg});
  }

  OperatorRegistry& registry_;
  EngineConfig config_;
  std::mt19937_64 rng_;
  bool running_ = false;
  double now_ = 0.0;
  double next_sample_ = 0.0;
  std::uint64_t seq_ = 0;
  std::size_t next_job_ = 0;

  PipelineSpec spec_;
  std::map<std::string, std::size_t> index_;
  Graph graph_;
  std::vector<std::size_t> rank_;
  std::vector<ClipArtifact> inputs_;
  std::vector<std::deque<Item>> queues_;
  std::vector<std::map<std::string, std::vector<std::optional<ClipArtifact>>>> joins_;
  std::vector<std::vector<double>> stage_latency_;
  std::map<ResourceClass, std::vector<bool>> pool_busy_;
  std::map<ResourceClass, std::size_t> rr_;
  std::map<ResourceClass, double> busy_s_;
  std::map<std::size_t, Job> jobs_;
  std::map<std::string, RootState> roots_;
  std::vector<std::pair<std::string, std::string>> swaps_;
  std::priority_queue<Event, std::vector<Event>, Later> events_;
  RunResult result_;
};

Engine::Engine(OperatorRegistry& registry, EngineConfig config)
    : impl_(std::make_unique<Impl>(registry, config)) {}
Engine::~Engine() = default;

void Engine::start(const PipelineSpec& spec, std::vector<ClipArtifact> inputs) {
  impl_->start(spec, std::move(inputs));
}
void Engine::advance_until(double t_s) { impl_->advance_until(t_s); }
RunResult Engine::finish(std::optional<double> stop_at) { return impl_->finish(stop_at); }
SwapReceipt Engine::hot_swap(const std::string& op, const std::string& version) {
  return impl_->hot_swap(op, version);
}
void Engine::schedule_hot_swap(double t_s, const std::string& op, const std::string& version) {
  impl_->schedule_hot_swap(t_s, op, version);
}
double Engine::now() const { return impl_->now(); }
bool Engine::running() const { return impl_->running(); }

RunResult run(OperatorRegistry& registry, const PipelineSpec& spec, std::vector<ClipArtifact> inputs,
              const EngineConfig& config) {
  Engine engine(registry, config);
  engine.start(spec, std::move(inputs));
  return engine.finish();
}

}  // namespace egocollect::pipeline
