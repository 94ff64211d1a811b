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

#ifndef FIELDNAV_FIELD_HUMANOID_FIELD_HPP_
#define FIELDNAV_FIELD_HUMANOID_FIELD_HPP_

#include <span>
#include <vector>

#include <Eigen/Core>

#include "fieldnav/voxel/grid.hpp"

namespace fieldnav::field {

// Shape of the attractive goal region.
//   kPoint  : the single voxel containing the goal.
//   kColumn : every free voxel in the goal's vertical column, so the
//             attraction is horizontal at all heights in open space.
enum class GoalShape { kPoint, kColumn };

struct FieldParams {
  double eta = 1.0;         // attractive scale
  double xi = 0.05;         // repulsive scale
  double d0 = 0.5;          // obstacle influence range [m]
  double lambda = 1.0;      // collision-urgency scale
  double kappa_max = 10.0;  // vMF concentration scale
  double d_clamp = 0.05;    // repulsion plateau below this distance [m]
  double eps_norm = 1e-8;   // |F| at or below this is treated as zero
  GoalShape goal_shape = GoalShape::kColumn;

  // Throws ValidationError when a positivity constraint or d_clamp < d0
  // fails.
  void validate() const;
};

struct BodyPartState {
  int id = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  bool is_root = false;
  double radius = 0.0;
};

// The assembled field for one (scene, goal). Immutable once built.
struct HumanoidField {
  voxel::ScalarField geodesic;   // path length to the goal, sentinel if unreachable
  voxel::ScalarField sdf;        // signed distance
  voxel::ScalarField potential;  // eta * geodesic + repulsive, sentinel-filled
  voxel::VectorField guidance;   // -grad(potential)
  voxel::VectorField sdf_grad;   // grad(sdf), sentinel-filled
  Eigen::Vector3d goal = Eigen::Vector3d::Zero();
  FieldParams params;

  const voxel::GridSpec& spec() const { return potential.spec; }
};

struct FieldQuery {
  BodyPartState part;
  Eigen::Vector3d f_h = Eigen::Vector3d::Zero();
  double w0 = 0.0;
  double w1 = 0.0;
  Eigen::Vector3d mu = Eigen::Vector3d::UnitX();
  double kappa = 0.0;
};

// Shortest path length over the 26-connected free-voxel graph with
// Euclidean edge weights. Throws InvalidGoalError when the goal is out of
// bounds or inside an obstacle.
voxel::ScalarField geodesic_field(const voxel::OccupancyGrid& grid,
                                  const Eigen::Vector3d& goal);
// Multi-source variant; every source index must be a free voxel.
voxel::ScalarField geodesic_field(const voxel::OccupancyGrid& grid,
                                  std::span<const std::size_t> sources);

// Sources for `shape` around `goal`. Validates the goal like geodesic_field.
std::vector<std::size_t> goal_sources(const voxel::OccupancyGrid& grid,
                                      const Eigen::Vector3d& goal,
                                      GoalShape shape);

voxel::ScalarField attractive_potential(const voxel::ScalarField& geodesic,
                                        double eta);

// 0.5 * xi * (1/d - 1/d0)^2 inside the influence range, 0 beyond it, and
// the d_clamp value for anything closer than d_clamp (including d < 0).
double repulsive_value(double d, double xi, double d0, double d_clamp);
voxel::ScalarField repulsive_potential(const voxel::ScalarField& sdf,
                                       double xi, double d0, double d_clamp);

HumanoidField build_field(const voxel::OccupancyGrid& grid,
                          const Eigen::Vector3d& goal,
                          const FieldParams& params);

double priority_w0(const BodyPartState& part);

// lambda * max(-grad d . v, 0.5) * exp(-d), with d and grad d sampled at
// the part. An all-free grid (d = +inf) gives 0.
double priority_w1(const BodyPartState& part, const voxel::ScalarField& sdf,
                   const voxel::VectorField& sdf_grad, double lambda);

// Optional override used by diagnostics that disable urgency weighting.
struct QueryOptions {
  bool constant_w1 = false;
  double w1_value = 1.0;
};

FieldQuery query_humanoid_pf(const HumanoidField& field,
                             const BodyPartState& part,
                             const QueryOptions& options = {});

// Flat [f_h(0), f_h(1), ...] in part-id order. Throws ArityError unless
// parts.size() == expected_parts and the ids are a permutation of
// 0..expected_parts-1.
std::vector<double> obs_field(const HumanoidField& field,
                              std::span<const BodyPartState> parts,
                              std::size_t expected_parts = 13);

}  // namespace fieldnav::field

#endif  // FIELDNAV_FIELD_HUMANOID_FIELD_HPP_
