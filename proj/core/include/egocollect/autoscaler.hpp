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
#include <optional>
#include <string_view>

#include "egocollect/worker_pool.hpp"

namespace egocollect::fleet {

struct AutoscalerPolicy {
  int queue_high = 20;
  int queue_low = 2;
  double latency_slo_ms = 5000.0;
  double evaluate_every_s = 10.0;
  double cooldown_s = 15.0;
  int step_up = 10;
  int step_down = 2;
  int min_workers = 4;
  int max_workers = 48;

  void validate() const;
};

struct StageMetrics {
  std::size_t queue_depth = 0;
  double p95_latency_ms = 0.0;
};

enum class ScaleAction { kHold, kUp, kDown };

struct ScaleDecision {
  ScaleAction action = ScaleAction::kHold;
  int count = 0;  // workers added or removed after clamping
};

struct AutoscalerState {
  std::optional<double> last_action_s;
};

/// UP when the queue is above queue_high or p95 exceeds the SLO; DOWN when the
/// queue is below queue_low and p95 is under the SLO. A non-HOLD decision
/// within cooldown_s of the previous one, or one clamped to zero by the pool
/// bounds, becomes HOLD. Updates state on non-HOLD results.
ScaleDecision autoscale_tick(const AutoscalerPolicy& policy, const StageMetrics& metrics,
                             const WorkerPool& pool, double now_s, AutoscalerState& state);

std::string_view to_string(ScaleAction action);

}  // namespace egocollect::fleet
