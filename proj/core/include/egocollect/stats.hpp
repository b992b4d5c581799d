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
#include <vector>

namespace egocollect {

struct Percentiles {
  double p50 = 0.0, p95 = 0.0, p99 = 0.0, mean = 0.0, max = 0.0;
  std::size_t count = 0;
};

/// Nearest-rank percentiles; an empty sample gives all zeros.
Percentiles summarize(std::vector<double> values);

}  // namespace egocollect
