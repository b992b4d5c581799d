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
#include <map>
#include <random>
#include <set>

#include "egocollect/builtin_ops.hpp"
#include "egocollect/error.hpp"
#include "egocollect/io.hpp"
#include "egocollect/pipeline.hpp"
#include "egocollect/synth.hpp"

using namespace egocollect;
using namespace egocollect::pipeline;

namespace {

OpResult pass_through(const ClipArtifact& a, const OpContext&) { return OpResult::emit(a); }

void add_op(OperatorRegistry& reg, const std::string& name, const std::string& version,
            ResourceClass rc = ResourceClass::kCpu, double mean = 1.0, double dispersion = 0.0,
            const std::string& in = "clip", const std::string& out = "clip", OperatorFn fn = pass_through) {
  reg.register_operator({name, version, rc, in, out, mean, dispersion}, std::move(fn));
}

std::vector<ClipArtifact> items(std::size_t n, const std::string& kind = "clip") {
  std::vector<ClipArtifact> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i].clip_id = "item-" + std::to_string(i);
    v[i].kind = kind;
  }
  return v;
}

PipelineSpec linear(std::initializer_list<std::pair<const char*, const char*>> stages) {
  PipelineSpec s;
  std::string prev;
  for (const auto& [id, op] : stages) {
    s.stages.push_back({id, op, std::nullopt});
    if (!prev.empty()) s.edges.emplace_back(prev, id);
    prev = id;
  }
  return s;
}

bool has_kind(const std::vector<SpecError>& errs, SpecErrorKind k) {
  return std::any_of(errs.begin(), errs.end(), [k](const SpecError& e) { return e.kind == k; });
}

void expect_conservation(const RunReport& r) {
  EXPECT_EQ(r.roots.inputs, r.roots.sink + r.roots.pool + r.roots.error + r.roots.in_flight);
}

void expect_topological(const ClipArtifact& a, const PipelineSpec& spec) {
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < a.lineage.size(); ++i) pos[a.lineage[i].stage_id] = i;
  EXPECT_EQ(pos.size(), a.lineage.size()) << "repeated stage in lineage";
  for (const auto& [u, v] : spec.edges) {
    if (pos.count(u) && pos.count(v)) EXPECT_LT(pos[u], pos[v]) << u << "->" << v;
  }
}

}  // namespace

TEST(SemVer, ParseAndOrder) {
  EXPECT_EQ(SemVer::parse("v1.2.3").str(), "1.2.3");
  EXPECT_EQ(SemVer::parse("2").str(), "2.0.0");
  EXPECT_LT(SemVer::parse("1.9.9"), SemVer::parse("1.10.0"));
  EXPECT_LT(SemVer::parse("2.0.0-rc1"), SemVer::parse("2.0.0"));
  EXPECT_THROW(SemVer::parse("1.x"), Error);
  EXPECT_THROW(SemVer::parse(""), Error);
}

TEST(Registry, HighestVersionWins) {
  OperatorRegistry reg;
  add_op(reg, "op", "1.0.0");
  EXPECT_EQ(reg.resolve("op").spec.version, "1.0.0");
  add_op(reg, "op", "2.0.0");
  EXPECT_EQ(reg.resolve("op").spec.version, "2.0.0");
  EXPECT_EQ(reg.resolve("op", std::string("1.0.0")).spec.version, "1.0.0");
  EXPECT_EQ(reg.versions("op"), (std::vector<std::string>{"1.0.0", "2.0.0"}));
}

TEST(Registry, Errors) {
  OperatorRegistry reg;
  add_op(reg, "op", "1.0.0");
  auto code = [&](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kParse;
  };
  EXPECT_EQ(code([&] { add_op(reg, "op", "1.0"); }), ErrorCode::kDuplicateVersion);
  EXPECT_EQ(code([&] { reg.resolve("nope"); }), ErrorCode::kUnknownOperator);
  EXPECT_EQ(code([&] { reg.resolve("op", std::string("3.0.0")); }), ErrorCode::kUnknownVersion);
}

TEST(Registry, NewVersionReachesNextDispatchOnlyWhenUnpinned) {
  OperatorRegistry reg;
  add_op(reg, "op", "1.0.0");
  auto spec = linear({{"free", "op"}, {"pinned", "op"}});
  spec.stages[1].version = "1.0.0";
  add_op(reg, "op", "2.0.0");
  const auto r = run(reg, spec, items(3));
  for (const auto& o : r.outputs) {
    EXPECT_EQ(o.lineage[0].version, "2.0.0");
    EXPECT_EQ(o.lineage[1].version, "1.0.0");
  }
}

TEST(Validate, LinearIsOk) {
  OperatorRegistry reg;
  add_op(reg, "a", "1", ResourceClass::kCpu, 1, 0, "x", "y");
  add_op(reg, "b", "1", ResourceClass::kCpu, 1, 0, "y", "z");
  add_op(reg, "c", "1", ResourceClass::kCpu, 1, 0, "z", "z");
  EXPECT_TRUE(validate_spec(linear({{"s1", "a"}, {"s2", "b"}, {"s3", "c"}}), reg).empty());
}

TEST(Validate, CycleListsStages) {
  OperatorRegistry reg;
  add_op(reg, "op", "1");
  PipelineSpec s;
  s.stages = {{"src", "op", {}}, {"A", "op", {}}, {"B", "op", {}}, {"out", "op", {}}};
  s.edges = {{"src", "A"}, {"A", "B"}, {"B", "A"}, {"B", "out"}};
  const auto errs = validate_spec(s, reg);
  ASSERT_TRUE(has_kind(errs, SpecErrorKind::kCycle));
  for (const auto& e : errs) {
    if (e.kind == SpecErrorKind::kCycle) {
      EXPECT_EQ(std::set<std::string>(e.stages.begin(), e.stages.end()), (std::set<std::string>{"A", "B"}));
    }
  }
}

TEST(Validate, StructuralErrors) {
  OperatorRegistry reg;
  add_op(reg, "op", "1");
  EXPECT_TRUE(has_kind(validate_spec({}, reg), SpecErrorKind::kEmpty));
  auto s = linear({{"a", "op"}, {"a", "op"}});
  EXPECT_TRUE(has_kind(validate_spec(s, reg), SpecErrorKind::kDuplicateStage));
  s = linear({{"a", "op"}});
  s.edges = {{"a", "ghost"}};
  EXPECT_TRUE(has_kind(validate_spec(s, reg), SpecErrorKind::kDanglingEdge));
  s.edges = {{"a", "a"}};
  EXPECT_TRUE(has_kind(validate_spec(s, reg), SpecErrorKind::kSelfLoop));
  s = linear({{"a", "missing"}});
  EXPECT_TRUE(has_kind(validate_spec(s, reg), SpecErrorKind::kUnknownOperator));
  s = linear({{"a", "op"}});
  s.stages[0].version = "9.9.9";
  EXPECT_TRUE(has_kind(validate_spec(s, reg), SpecErrorKind::kUnknownVersion));
  s = linear({{"a", "op"}});
  s.retries = -1;
  EXPECT_TRUE(has_kind(validate_spec(s, reg), SpecErrorKind::kBadRetries));
}

TEST(Validate, RandomMutationsMatchBruteForce) {
  // Ops map kind x/y to x/y; a stage chain is valid only when kinds line up
  // along every edge and the graph is acyclic.
  OperatorRegistry reg;
  const std::vector<std::tuple<std::string, std::string, std::string>> ops{
      {"xx", "x", "x"}, {"xy", "x", "y"}, {"yy", "y", "y"}, {"yx", "y", "x"}};
  for (const auto& [name, in, out] : ops) add_op(reg, name, "1", ResourceClass::kCpu, 1, 0, in, out);
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 3 + rep % 4;
    PipelineSpec s;
    std::uniform_int_distribution<int> pick_op(0, 3);
    for (int i = 0; i < n; ++i) s.stages.push_back({"s" + std::to_string(i), std::get<0>(ops[pick_op(rng)]), {}});
    std::bernoulli_distribution coin(0.5), rare(0.1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if ((i < j && coin(rng)) || (i > j && rare(rng))) s.edges.emplace_back(s.stages[i].id, s.stages[j].id);
      }
    }
    // Brute force: reachability closure for cycles, per-edge kind check.
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    std::map<std::string, int> idx;
    for (int i = 0; i < n; ++i) idx[s.stages[i].id] = i;
    bool mismatch = false;
    auto kinds = [&](const std::string& op) {
      for (const auto& [name, in, out] : ops) {
        if (name == op) return std::make_pair(in, out);
      }
      return std::make_pair(std::string(), std::string());
    };
    for (const auto& [u, v] : s.edges) {
      reach[idx[u]][idx[v]] = true;
      mismatch |= kinds(s.stages[idx[u]].op).second != kinds(s.stages[idx[v]].op).first;
    }
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) reach[i][j] = reach[i][j] || (reach[i][k] && reach[k][j]);
      }
    }
    bool cycle = false;
    for (int i = 0; i < n; ++i) cycle |= reach[i][i];
    const auto errs = validate_spec(s, reg);
    EXPECT_EQ(errs.empty(), !cycle && !mismatch) << "rep " << rep;
    EXPECT_EQ(has_kind(errs, SpecErrorKind::kCycle), cycle) << "rep " << rep;
    EXPECT_EQ(has_kind(errs, SpecErrorKind::kKindMismatch), mismatch) << "rep " << rep;
  }
}

TEST(Engine, IdentityLinearPipeline) {
  OperatorRegistry reg;
  add_op(reg, "id", "1.0.0");
  const auto spec = linear({{"a", "id"}, {"b", "id"}, {"c", "id"}});
  const auto r = run(reg, spec, items(10));
  ASSERT_EQ(r.outputs.size(), 10u);
  for (const auto& o : r.outputs) {
    ASSERT_EQ(o.lineage.size(), 3u);
    EXPECT_EQ(o.lineage[0].stage_id, "a");
    EXPECT_EQ(o.lineage[2].stage_id, "c");
  }
  expect_conservation(r.report);
  EXPECT_EQ(r.report.roots.sink, 10u);
}

TEST(Engine, InvalidSpecAndEmptyPool) {
  OperatorRegistry reg;
  add_op(reg, "gpu", "1", ResourceClass::kGpu);
  EngineConfig cfg;
  cfg.gpu_workers = 0;
  Engine e(reg, cfg);
  try {
    e.start(linear({{"a", "gpu"}}), items(1));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kInvalidSpec);
  }
  Engine e2(reg, {});
  EXPECT_THROW(e2.start(linear({{"a", "missing"}}), items(1)), Error);
}

TEST(Engine, QcStageMatchesStandaloneQc) {
  synth::CorpusRecipe recipe;
  recipe.n_clips = 40;
  const auto corpus = synth::gen_qc_corpus(recipe);
  OperatorRegistry reg;
  register_builtin_operators(reg);
  std::vector<ClipArtifact> in;
  std::set<std::string> fail, pass;
  for (const auto& c : corpus) {
    in.push_back(make_clip_artifact(c.clip));
    (qc::check_clip(c.clip).outcome == qc::Outcome::kFail ? fail : pass).insert(c.clip.clip_id);
  }
  const auto r = run(reg, default_pipeline_spec(), std::move(in));
  std::set<std::string> pooled, sunk;
  for (const auto& e : r.hard_negatives.entries()) pooled.insert(e.clip_id);
  for (const auto& o : r.outputs) sunk.insert(o.root_id);
  EXPECT_EQ(pooled, fail);
  EXPECT_EQ(sunk, pass);
  EXPECT_TRUE(r.error_bin.empty());
  expect_conservation(r.report);
}

TEST(Engine, SegmentStubSplitsAtMarkers) {
  OperatorRegistry reg;
  register_builtin_operators(reg);
  PipelineSpec spec = linear({{"seg", "segment_stub"}});
  const auto clip = synth::gen_qc_corpus({1, 1, 3.0, 30.0, 0, 10, 0, 6, 0.5}).front().clip;
  const auto r = run(reg, spec, {make_clip_artifact(clip, "30,60")});
  ASSERT_EQ(r.outputs.size(), 3u);
  std::size_t frames = 0;
  for (const auto& o : r.outputs) {
    frames += std::any_cast<const qc::AnnotatedClip&>(o.payload).world_track.frames.size();
    EXPECT_EQ(o.root_id, clip.clip_id);
  }
  EXPECT_EQ(frames, 90u);
  EXPECT_EQ(r.report.roots.sink, 1u);
}

TEST(Engine, DiamondLineageIsTopological) {
  OperatorRegistry reg;
  add_op(reg, "cpu", "1", ResourceClass::kCpu, 0.3, 0.5);
  add_op(reg, "gpu", "1", ResourceClass::kGpu, 0.7, 0.5);
  PipelineSpec s;
  s.stages = {{"src", "cpu", {}}, {"left", "gpu", {}}, {"right", "cpu", {}}, {"mid", "cpu", {}}, {"join", "cpu", {}}, {"out", "gpu", {}}};
  s.edges = {{"src", "left"}, {"src", "right"}, {"right", "mid"}, {"left", "join"}, {"mid", "join"}, {"join", "out"}};
  EngineConfig cfg;
  cfg.seed = 3;
  const auto r = run(reg, s, items(50), cfg);
  ASSERT_EQ(r.outputs.size(), 50u);
  for (const auto& o : r.outputs) {
    EXPECT_EQ(o.lineage.size(), 6u);
    expect_topological(o, s);
  }
  expect_conservation(r.report);
}

TEST(Engine, ConservationWithFailuresRejectsAndSwaps) {
  OperatorRegistry reg;
  add_op(reg, "id", "1.0.0", ResourceClass::kCpu, 0.2, 0.3);
  add_op(reg, "id", "2.0.0", ResourceClass::kCpu, 0.1, 0.3);
  add_op(reg, "flaky", "1.0.0", ResourceClass::kGpu, 0.5, 0.3, "clip", "clip", [](const ClipArtifact& a, const OpContext& c) {
    if (c.seed % 7 == 0) return OpResult::fail("boom");
    if (c.seed % 5 == 0) {
      qc::QCVerdict v;
      v.clip_id = a.clip_id;
      v.outcome = qc::Outcome::kFail;
      v.reasons = {{qc::ReasonKind::kMalformed, {}, 0, "stub"}};
      return OpResult::reject(v);
    }
    return OpResult::emit(a);
  });
  auto spec = linear({{"a", "id"}, {"b", "flaky"}, {"c", "id"}});
  spec.retries = 1;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EngineConfig cfg;
    cfg.seed = seed;
    cfg.arrival_interval_s = 0.05;
    Engine e(reg, cfg);
    e.start(spec, items(200));
    e.schedule_hot_swap(3.0, "id", "2.0.0");
    e.schedule_hot_swap(6.0, "id", "1.0.0");
    const auto r = e.finish();
    expect_conservation(r.report);
    EXPECT_EQ(r.report.roots.inputs, 200u);
    EXPECT_EQ(r.report.roots.in_flight, 0u);
    EXPECT_GT(r.report.roots.error + r.report.roots.pool, 0u);
  }
}

TEST(Engine, DeterministicReport) {
  synth::CorpusRecipe recipe;
  recipe.n_clips = 20;
  const auto corpus = synth::gen_qc_corpus(recipe);
  auto once = [&] {
    OperatorRegistry reg;
    register_builtin_operators(reg);
    std::vector<ClipArtifact> in;
    for (const auto& c : corpus) in.push_back(make_clip_artifact(c.clip, "45"));
    EngineConfig cfg;
    cfg.seed = 77;
    return io::report_json(run(reg, default_pipeline_spec(), std::move(in), cfg).report);
  };
  EXPECT_EQ(once(), once());
}

TEST(Engine, DispatchRespectsResourceClass) {
  OperatorRegistry reg;
  add_op(reg, "cpu", "1", ResourceClass::kCpu, 0.2, 0.4);
  add_op(reg, "gpu", "1", ResourceClass::kGpu, 0.5, 0.4);
  const auto spec = linear({{"a", "cpu"}, {"b", "gpu"}, {"c", "cpu"}, {"d", "gpu"}});
  EngineConfig cfg;
  cfg.cpu_workers = 3;
  cfg.gpu_workers = 2;
  cfg.arrival_interval_s = 0.1;
  const auto r = run(reg, spec, items(100), cfg);
  ASSERT_FALSE(r.trace.empty());
  for (const auto& d : r.trace) {
    EXPECT_EQ(d.pool, reg.resolve(d.op).spec.resource_class);
    EXPECT_LT(d.worker, d.pool == ResourceClass::kCpu ? 3 : 2);
  }
}

TEST(Engine, AllGpuSpecLeavesCpuIdle) {
  OperatorRegistry reg;
  add_op(reg, "gpu", "1", ResourceClass::kGpu, 0.5);
  const auto r = run(reg, linear({{"a", "gpu"}, {"b", "gpu"}}), items(20));
  EXPECT_EQ(r.report.utilization.at(ResourceClass::kCpu), 0.0);
  EXPECT_GT(r.report.utilization.at(ResourceClass::kGpu), 0.5);
}

TEST(Engine, SingleGpuWorkerIsTheBottleneck) {
  // CPU stage: 8 workers x 0.1 s = 80/s; GPU stage: 1 worker x 1 s = 1/s;
  // arrivals 20/s. At t = 5 s, 99 items cleared the CPU stage and the GPU
  // stage has started 5, so 94 wait.
  OperatorRegistry reg;
  add_op(reg, "cpu", "1", ResourceClass::kCpu, 0.1);
  add_op(reg, "gpu", "1", ResourceClass::kGpu, 1.0);
  EngineConfig cfg;
  cfg.gpu_workers = 1;
  cfg.arrival_interval_s = 0.05;
  const auto r = run(reg, linear({{"pre", "cpu"}, {"infer", "gpu"}}), items(100), cfg);
  const auto& t = r.report.series_t;
  const auto at5 = static_cast<std::size_t>(std::find(t.begin(), t.end(), 5.0) - t.begin());
  ASSERT_LT(at5, t.size());
  EXPECT_EQ(r.report.stages.at("infer").queue_depth[at5], 94u);
  for (auto d : r.report.stages.at("pre").queue_depth) EXPECT_EQ(d, 0u);
  const auto& q = r.report.stages.at("infer").queue_depth;
  EXPECT_TRUE(std::is_sorted(q.begin(), q.begin() + static_cast<long>(at5)));
  EXPECT_NEAR(r.report.makespan_s, 0.1 + 100.0, 1e-9);
}

TEST(Engine, RoundRobinIsFair) {
  OperatorRegistry reg;
  add_op(reg, "fast", "1", ResourceClass::kCpu, 0.01);
  add_op(reg, "gpu", "1", ResourceClass::kGpu, 1.0, 0.3);
  PipelineSpec s;
  s.stages = {{"src", "fast", {}}, {"x", "gpu", {}}, {"y", "gpu", {}}};
  s.edges = {{"src", "x"}, {"src", "y"}};
  EngineConfig cfg;
  cfg.gpu_workers = 3;
  cfg.seed = 9;
  Engine e(reg, cfg);
  e.start(s, items(1000));
  const auto r = e.finish(300.0);
  const double x = static_cast<double>(r.report.stages.at("x").dispatched);
  const double y = static_cast<double>(r.report.stages.at("y").dispatched);
  ASSERT_GT(x, 100.0);
  EXPECT_LT(std::abs(x - y) / std::max(x, y), 0.05);
  expect_conservation(r.report);
  EXPECT_GT(r.report.roots.in_flight, 0u);
}

TEST(HotSwap, EmptyQueueSwapAppliesToEverything) {
  OperatorRegistry reg;
  add_op(reg, "op", "1.0.0");
  add_op(reg, "op", "1.1.0");
  reg.set_active("op", "1.0.0");
  Engine e(reg, {});
  e.start(linear({{"a", "op"}}), {});
  const auto rc = e.hot_swap("op", "1.1.0");
  EXPECT_EQ(rc.old_version, "1.0.0");
  EXPECT_EQ(rc.new_version, "1.1.0");
  EXPECT_EQ(rc.in_flight_count, 0u);
  e.finish();
  const auto r = run(reg, linear({{"a", "op"}}), items(5));
  for (const auto& o : r.outputs) EXPECT_EQ(o.lineage[0].version, "1.1.0");
}

TEST(HotSwap, MidRunSplitMatchesReceipt) {
  OperatorRegistry reg;
  add_op(reg, "pre", "1.0.0", ResourceClass::kCpu, 0.05);
  add_op(reg, "model", "1.0.0", ResourceClass::kGpu, 0.02, 0.2);
  add_op(reg, "model", "2.0.0", ResourceClass::kGpu, 0.02, 0.2);
  reg.set_active("model", "1.0.0");
  EngineConfig cfg;
  cfg.arrival_interval_s = 0.01;
  Engine e(reg, cfg);
  e.start(linear({{"pre", "pre"}, {"model", "model"}}), items(1000));
  e.schedule_hot_swap(5.0, "model", "2.0.0");
  const auto r = e.finish();
  ASSERT_EQ(r.outputs.size(), 1000u);
  ASSERT_EQ(r.report.swaps.size(), 1u);
  const auto& rc = r.report.swaps[0];
  std::size_t old_n = 0, new_n = 0;
  for (const auto& o : r.outputs) {
    const auto& l = o.lineage[1];
    if (l.version == "1.0.0") {
      ++old_n;
      EXPECT_LT(l.dispatched_at, rc.swap_time);
    } else {
      ++new_n;
      EXPECT_GE(l.dispatched_at, rc.swap_time);
    }
  }
  EXPECT_EQ(old_n + new_n, 1000u);
  EXPECT_GT(old_n, 0u);
  EXPECT_GT(new_n, 0u);
  const auto& vc = r.report.stages.at("model").version_counts;
  EXPECT_EQ(vc.at("1.0.0"), old_n);
  EXPECT_EQ(vc.at("2.0.0"), new_n);
}

TEST(HotSwap, SameVersionIsNoop) {
  OperatorRegistry reg;
  add_op(reg, "op", "1.0.0", ResourceClass::kCpu, 1.0);
  Engine e(reg, {});
  e.start(linear({{"a", "op"}}), items(4));
  e.advance_until(0.5);
  const auto rc = e.hot_swap("op", "1.0.0");
  EXPECT_TRUE(rc.noop);
  EXPECT_EQ(rc.in_flight_count, 4u);
  EXPECT_EQ(e.finish().outputs.size(), 4u);
}

TEST(HotSwap, PinnedStageKeepsVersion) {
  OperatorRegistry reg;
  add_op(reg, "op", "1.0.0", ResourceClass::kCpu, 0.1);
  add_op(reg, "op", "2.0.0", ResourceClass::kCpu, 0.1);
  reg.set_active("op", "1.0.0");
  auto spec = linear({{"free", "op"}, {"pinned", "op"}});
  spec.stages[1].version = "1.0.0";
  EngineConfig cfg;
  cfg.arrival_interval_s = 0.05;
  Engine e(reg, cfg);
  e.start(spec, items(100));
  e.schedule_hot_swap(2.0, "op", "2.0.0");
  const auto r = e.finish();
  for (const auto& o : r.outputs) EXPECT_EQ(o.lineage[1].version, "1.0.0");
  EXPECT_GT(r.report.stages.at("free").version_counts.at("2.0.0"), 0u);
}

TEST(HotSwap, IncompatibleKinds) {
  OperatorRegistry reg;
  add_op(reg, "op", "1.0.0");
  add_op(reg, "op", "2.0.0", ResourceClass::kCpu, 1.0, 0.0, "clip", "other");
  reg.set_active("op", "1.0.0");
  Engine e(reg, {});
  e.start(linear({{"a", "op"}}), items(1));
  try {
    e.hot_swap("op", "2.0.0");
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kIncompatibleVersion);
  }
  EXPECT_THROW(e.hot_swap("op", "9.0.0"), Error);
}
