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

#ifndef FIELDNAV_SIM_ROLLOUT_HPP_
#define FIELDNAV_SIM_ROLLOUT_HPP_

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fieldnav/field/humanoid_field.hpp"
#include "fieldnav/scene/scene.hpp"
#include "fieldnav/sim/agent.hpp"
#include "json.hpp"

namespace fieldnav::sim {

enum class Termination { kReached, kTimeout, kCollision, kStalled };
std::string_view to_string(Termination t);

struct RolloutConfig {
  double dt = 0.02;
  double time_limit = 5.0;      // lower bound on the limit [s]
  double time_per_meter = 2.5;  // limit grows with distance / max_speed
  double success_radius = 0.1;
  double stall_window = 1.0;     // [s]
  double stall_distance = 1e-4;  // [m]
  bool reverse_field = false;
  bool constant_w1 = false;
  double w1_value = 1.0;
  double trial_jitter = 0.05;  // start perturbation radius for trials > 0 [m]

  void validate() const;
  // max(time_limit, time_per_meter * distance / max_speed).
  double limit_for(double distance, double max_speed) const;
};

struct TrajectoryStep {
  double t = 0.0;
  AgentState state;
  std::vector<field::FieldQuery> queries;  // guidance that produced this step
  double r_field = 0.0;
};

struct RolloutResult {
  bool success = false;
  bool collided = false;
  double time_used = 0.0;
  double de = 0.0;  // closest 2D root-to-goal distance
  double min_clearance = 0.0;
  Termination termination = Termination::kTimeout;
  std::vector<TrajectoryStep> trajectory;
};

// Steps the follower on a fixed field from `start` toward field.goal.
RolloutResult rollout_on_field(const field::HumanoidField& field, const AgentModel& model,
                               const AgentState& start, const RolloutConfig& cfg);

// Builds the scene grid and field once, then rolls out from the manifest
// start.
RolloutResult run_rollout(const scene::SceneManifest& scene, const AgentModel& model,
                          const field::FieldParams& params, const RolloutConfig& cfg);

// One record per step, JSON lines.
nlohmann::json trace_record(const TrajectoryStep& step);
void write_trace(const RolloutResult& result, std::ostream& out);
nlohmann::json summary_json(const RolloutResult& result);

// A wall segment across the start-goal line with equal gaps on both sides.
// The room has an odd number of cells across so the symmetry plane
// y = kDilemmaAxis passes through cell centers.
inline constexpr double kDilemmaAxis = 2.475;
scene::SceneManifest dilemma_scenario();

struct TrialRecord {
  std::size_t scene = 0;
  std::uint64_t seed = 0;
  int trial = 0;
  bool success = false;
  bool collided = false;
  double time_used = 0.0;
  double de = 0.0;
  Termination termination = Termination::kTimeout;
};

struct Evaluation {
  double sr = 0.0;               // percent
  double de_mean = 0.0;          // over all trials
  double de_mean_success = 0.0;  // over successful trials, 0 if none
  std::vector<TrialRecord> trials;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// SR and DE means over the given trial records. Throws ValidationError on
// an empty list.
Evaluation summarize(std::vector<TrialRecord> trials);

// Start of trial `trial`: the manifest start for trial 0, otherwise a
// deterministic offset within cfg.trial_jitter.
Eigen::Vector2d trial_start(const scene::SceneManifest& scene, int trial,
                            const RolloutConfig& cfg);

// Rolls out `trials` trials per scene. Scenes run in parallel on up to
// `threads` workers (0: FIELDNAV_THREADS, else hardware concurrency).
Evaluation evaluate(std::span<const scene::SceneManifest> scenes, const AgentModel& model,
                    const field::FieldParams& params, const RolloutConfig& cfg,
                    int trials, int threads = 0);

// Worker count from FIELDNAV_THREADS, else hardware concurrency (>= 1).
int default_threads();

}  // namespace fieldnav::sim

#endif  // FIELDNAV_SIM_ROLLOUT_HPP_
