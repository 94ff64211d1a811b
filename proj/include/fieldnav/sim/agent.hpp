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

#ifndef FIELDNAV_SIM_AGENT_HPP_
#define FIELDNAV_SIM_AGENT_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "fieldnav/field/humanoid_field.hpp"

namespace fieldnav::sim {

// One probe sphere of the body, in the root frame (x forward, y left,
// z up from the floor) at full standing height.
struct PartSpec {
  std::string name;
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
  double radius = 0.05;
  int mirror = -1;  // left/right partner, -1 on the spine
  bool upper = false;  // drives crouching
  bool mid = false;    // drives leaning
  bool lower = false;  // drives step lift
  double lift_weight = 0.0;
};

std::vector<PartSpec> humanoid_parts();

// Kinematic stand-in for a humanoid: planar root motion plus crouch, lean
// and step lift. Rates are in m/s of the moved probe.
struct AgentModel {
  std::vector<PartSpec> parts = humanoid_parts();
  int root_index = 0;
  double min_height = 0.9;  // crouch range, height of the top probe [m]
  double max_height = 1.3;
  double max_speed = 1.0;
  double max_crouch_rate = 1.0;
  double max_lateral_offset = 0.15;
  double max_lean_rate = 0.5;
  double max_lift = 0.3;
  double max_lift_rate = 1.0;
  // Drive magnitude that already commands full speed.
  double drive_saturation = 0.5;
  double crouch_gain = 6.0;
  double lean_gain = 1.0;
  double lift_gain = 2.0;
  double recover_gain = 3.0;
  // Tie-break when the whole-body drive cancels: slide along the nearest
  // obstacle. Entered below escape_enter, left above escape_exit. The side
  // is the one with lower potential escape_probe metres along the tangent;
  // differences within symmetry_tolerance leave the agent holding.
  double escape_enter = 0.1;
  double escape_exit = 0.3;
  double escape_gain = 1.0;
  double escape_probe = 0.25;
  double symmetry_tolerance = 1e-9;

  int size() const { return static_cast<int>(parts.size()); }
  double min_height_scale() const { return min_height / max_height; }
  // Throws ValidationError.
  void validate() const;
};

struct AgentState {
  Eigen::Vector2d root_xy = Eigen::Vector2d::Zero();
  double heading = 0.0;  // radians, fixed per goal
  double height_scale = 1.0;
  double lean = 0.0;  // sideways spine shift at the top probe [m]
  double lift = 0.0;  // foot lift [m]
  // Rates applied over the last step; part velocities derive from these.
  Eigen::Vector2d root_velocity = Eigen::Vector2d::Zero();
  double crouch_rate = 0.0;  // d(height_scale)/dt
  double lean_rate = 0.0;
  double lift_rate = 0.0;
  int escape = 0;  // tie-break side (+1 / -1), 0 when inactive
};

// Agent standing still at `xy`, facing `target`.
AgentState initial_state(const Eigen::Vector2d& xy, const Eigen::Vector2d& target);

std::vector<field::BodyPartState> derive_parts(const AgentModel& model,
                                               const AgentState& state);

struct FollowerOptions {
  bool reverse_field = false;  // follow +grad U instead (diagnostic)
  field::QueryOptions query;
};

struct FollowerStep {
  AgentState state;
  std::vector<field::FieldQuery> queries;  // at the pre-step configuration
};

// One explicit Euler step of the field follower. Throws ValidationError
// unless dt is in (0, 0.1], DomainError when a part leaves the field.
FollowerStep step_follower_detailed(const field::HumanoidField& field,
                                    const AgentModel& model,
                                    const AgentState& state, double dt,
                                    const FollowerOptions& options = {});
AgentState step_follower(const field::HumanoidField& field, const AgentModel& model,
                         const AgentState& state, double dt,
                         const FollowerOptions& options = {});

// True iff some part's sampled signed distance is below its radius.
bool check_collision(const voxel::ScalarField& sdf,
                     const std::vector<field::BodyPartState>& parts);
bool check_collision(const voxel::OccupancyGrid& grid,
                     const std::vector<field::BodyPartState>& parts);

// Smallest sampled (distance - radius) over the parts.
double min_clearance(const voxel::ScalarField& sdf,
                     const std::vector<field::BodyPartState>& parts);

}  // namespace fieldnav::sim

#endif  // FIELDNAV_SIM_AGENT_HPP_
