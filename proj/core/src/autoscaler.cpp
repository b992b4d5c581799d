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

#include "egocollect/autoscaler.hpp"

#include <algorithm>

#include "egocollect/error.hpp"

namespace egocollect {

std::string_view to_string(ResourceClass rc) {
  return rc == ResourceClass::kGpu ? "GPU" : "CPU";
}

}  // namespace egocollect

namespace egocollect::fleet {

void AutoscalerPolicy::validate() const {
  if (!(queue_low < queue_high)) throw Error(ErrorCode::kInvalidArgument, "queue_low must be < queue_high");
  if (!(min_workers >= 0 && min_workers <= max_workers)) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 <= min_workers <= max_workers");
  }
  if (!(evaluate_every_s > 0.0) || cooldown_s < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "evaluate_every_s must be > 0 and cooldown_s >= 0");
  }
  if (step_up < 1 || step_down < 1) throw Error(ErrorCode::kInvalidArgument, "steps must be >= 1");
}

ScaleDecision autoscale_tick(const AutoscalerPolicy& policy, const StageMetrics& metrics,
                             const WorkerPool& pool, double now_s, AutoscalerState& state) {
  const auto depth = static_cast<long long>(metrics.queue_depth);
  ScaleDecision d;
  if (depth > policy.queue_high || metrics.p95_latency_ms > policy.latency_slo_ms) {
    d = {ScaleAction::kUp, std::min(policy.step_up, pool.max_workers - pool.current)};
  } else if (depth < policy.queue_low && metrics.p95_latency_ms < policy.latency_slo_ms) {
    d = {ScaleAction::kDown, std::min(policy.step_down, pool.current - pool.min_workers)};
  }
  if (d.action == ScaleAction::kHold || d.count <= 0) return {};
  if (state.last_action_s && now_s - *state.last_action_s < policy.cooldown_s) return {};
  state.last_action_s = now_s;
  return d;
}

std::string_view to_string(ScaleAction action) {
  switch (action) {
    case ScaleAction::kHold: return "HOLD";
    case ScaleAction::kUp: return "UP";
    case ScaleAction::kDown: return "DOWN";
  }
  return "?";
}

}  // namespace egocollect::fleet
