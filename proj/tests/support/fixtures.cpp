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

#include "fixtures.hpp"

#include <atomic>
#include <unistd.h>

#include "egocollect/synth.hpp"

namespace fixture {

egocollect::qc::AnnotatedClip clean_clip(std::uint64_t seed, double duration_s, double fps) {
  namespace synth = egocollect::synth;
  egocollect::qc::AnnotatedClip c;
  c.clip_id = "clip-" + std::to_string(seed);
  c.camera_traj = synth::gen_trajectory(seed, duration_s, fps);
  auto hand = synth::gen_hand_track(c.camera_traj, seed);
  c.world_track = std::move(hand.world);
  c.intrinsics = synth::default_intrinsics();
  c.observed = std::move(hand.pixels);
  return c;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("egocollect-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace fixture
