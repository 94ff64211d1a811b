// Copyright 2026 The fieldnav Authors
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

// One self-describing run configuration: field parameters, agent model,
// scene generation, rollout and teleop settings, plus the run selectors
// (seed, difficulty, count, trials). A config file may give any subset of
// keys; missing keys keep their defaults, unknown keys are errors.

#ifndef FIELDNAV_CONFIG_HPP_
#define FIELDNAV_CONFIG_HPP_

#include <cstdint>
#include <string>

#include "fieldnav/field/humanoid_field.hpp"
#include "fieldnav/scene/scene.hpp"
#include "fieldnav/sim/agent.hpp"
#include "fieldnav/sim/rollout.hpp"
#include "json.hpp"

namespace fieldnav {

struct TeleopConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  double tick_period = 0.1;   // seconds between broadcast frames
  int substeps = 5;           // follower steps per tick, each rollout.dt long
  double snap_radius = 0.3;   // goal clicks snap to a walkable cell this close [m]
  int mask_stride = 1;        // down-sampling of the 2D blocked mask in frames
  int max_sessions = 16;
};

struct RunSelection {
  std::uint64_t seed = 0;
  double difficulty = 0.3;
  int count = 1;
  int trials = 1;
};

struct RunConfig {
  field::FieldParams field;
  sim::AgentModel agent;  // the part table is fixed; only scalars are configurable
  scene::SceneConfig scene;
  sim::RolloutConfig rollout;
  TeleopConfig teleop;
  RunSelection run;

  // Throws ConfigError describing the first invalid value.
  void validate() const;
};

// Every configurable key with its current value.
nlohmann::json to_json(const RunConfig& cfg);

// Applies the keys present in `j` on top of `base`. Throws ConfigError on
// an unknown section or key, or a value of the wrong type.
RunConfig apply_config(const nlohmann::json& j, RunConfig base = {});

// Reads and applies a JSON file. Throws ConfigError (with the path) when
// it cannot be read or parsed.
RunConfig load_config(const std::string& path, RunConfig base = {});

}  // namespace fieldnav

#endif  // FIELDNAV_CONFIG_HPP_
