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

#include <string_view>

namespace egocollect {

enum class ResourceClass { kCpu, kGpu };

std::string_view to_string(ResourceClass rc);

// Elastic pool bounds; current always stays within [min_workers, max_workers].
struct WorkerPool {
  ResourceClass resource_class = ResourceClass::kCpu;
  int current = 1;
  int min_workers = 1;
  int max_workers = 1;
};

}  // namespace egocollect
