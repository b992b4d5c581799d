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

#include <random>

#include "egocollect/autoscaler.hpp"
#include "egocollect/error.hpp"

using namespace egocollect;
using namespace egocollect::fleet;

TEST(Autoscaler, QuietAtMinimumHolds) {
  AutoscalerPolicy p;
  WorkerPool pool{ResourceClass::kCpu, p.min_workers, p.min_workers, p.max_workers};
  AutoscalerState s;
  EXPECT_EQ(autoscale_tick(p, {0, 10.0}, pool, 0.0, s).action, ScaleAction::kHold);
  EXPECT_FALSE(s.last_action_s);
}

TEST(Autoscaler, CooldownTurnsSecondUpIntoHold) {
  AutoscalerPolicy p;
  WorkerPool pool{ResourceClass::kCpu, 10, p.min_workers, p.max_workers};
  AutoscalerState s;
  const StageMetrics deep{static_cast<std::size_t>(p.queue_high + 1), 0.0};
  const auto a = autoscale_tick(p, deep, pool, 100.0, s);
  EXPECT_EQ(a.action, ScaleAction::kUp);
  EXPECT_EQ(a.count, p.step_up);
  pool.current += a.count;
  EXPECT_EQ(autoscale_tick(p, deep, pool, 100.0 + p.evaluate_every_s, s).action, ScaleAction::kHold);
  EXPECT_EQ(autoscale_tick(p, deep, pool, 100.0 + p.cooldown_s, s).action, ScaleAction::kUp);
}

TEST(Autoscaler, LatencyAloneTriggersUp) {
  AutoscalerPolicy p;
  WorkerPool pool{ResourceClass::kGpu, 10, p.min_workers, p.max_workers};
  AutoscalerState s;
  EXPECT_EQ(autoscale_tick(p, {5, p.latency_slo_ms + 1}, pool, 0.0, s).action, ScaleAction::kUp);
}

TEST(Autoscaler, ClampedToBounds) {
  AutoscalerPolicy p;
  WorkerPool pool{ResourceClass::kCpu, p.max_workers - 3, p.min_workers, p.max_workers};
  AutoscalerState s;
  const auto up = autoscale_tick(p, {100, 0.0}, pool, 0.0, s);
  EXPECT_EQ(up.count, 3);
  pool.current = p.max_workers;
  AutoscalerState s2;
  EXPECT_EQ(autoscale_tick(p, {100, 0.0}, pool, 0.0, s2).action, ScaleAction::kHold);
  EXPECT_FALSE(s2.last_action_s);
  pool.current = p.min_workers + 1;
  const auto down = autoscale_tick(p, {0, 0.0}, pool, 100.0, s2);
  EXPECT_EQ(down.action, ScaleAction::kDown);
  EXPECT_EQ(down.count, 1);
}

TEST(Autoscaler, RandomWalkRespectsBoundsAndCooldown) {
  AutoscalerPolicy p;
  WorkerPool pool{ResourceClass::kCpu, 10, p.min_workers, p.max_workers};
  AutoscalerState s;
  std::mt19937_64 rng(91);
  std::uniform_int_distribution<std::size_t> q(0, 40);
  std::uniform_real_distribution<double> lat(0, 10000);
  double last = -1e9;
  for (int i = 0; i < 2000; ++i) {
    const double now = i * p.evaluate_every_s;
    const auto d = autoscale_tick(p, {q(rng), lat(rng)}, pool, now, s);
    if (d.action == ScaleAction::kUp) pool.current += d.count;
    if (d.action == ScaleAction::kDown) pool.current -= d.count;
    if (d.action != ScaleAction::kHold) {
      EXPECT_GE(now - last, p.cooldown_s);
      last = now;
    }
    EXPECT_GE(pool.current, p.min_workers);
    EXPECT_LE(pool.current, p.max_workers);
  }
}

TEST(Autoscaler, PolicyValidation) {
  AutoscalerPolicy p;
  p.queue_low = p.queue_high;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.min_workers = 10;
  p.max_workers = 5;
  EXPECT_THROW(p.validate(), Error);
}
