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

#include "fieldnav/field/humanoid_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fieldnav/errors.hpp"
#include "fieldnav/voxel/ops.hpp"

namespace fieldnav::field {

void FieldParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(std::string("field params: ") + what);
  };
  require(eta >= 0.0 && std::isfinite(eta), "eta must be >= 0");
  require(xi >= 0.0 && std::isfinite(xi), "xi must be >= 0");
  require(d0 > 0.0 && std::isfinite(d0), "d0 must be > 0");
  require(lambda > 0.0 && std::isfinite(lambda), "lambda must be > 0");
  require(kappa_max > 0.0 && std::isfinite(kappa_max), "kappa_max must be > 0");
  require(d_clamp > 0.0, "d_clamp must be > 0");
  require(d_clamp < d0, "d_clamp must be < d0");
  require(eps_norm > 0.0, "eps_norm must be > 0");
}

voxel::ScalarField attractive_potential(const voxel::ScalarField& geodesic,
                                        double eta) {
  voxel::ScalarField out = geodesic;
  for (double& v : out.values) {
    if (!voxel::is_sentinel(v)) v *= eta;
  }
  return out;
}

double repulsive_value(double d, double xi, double d0, double d_clamp) {
  if (d >= d0) return 0.0;
  const double dd = std::max(d, d_clamp);
  const double t = 1.0 / dd - 1.0 / d0;
  return 0.5 * xi * t * t;
}

voxel::ScalarField repulsive_potential(const voxel::ScalarField& sdf,
                                       double xi, double d0, double d_clamp) {
  voxel::ScalarField out(sdf.spec, 0.0);
  for (std::size_t i = 0; i < sdf.values.size(); ++i) {
    out.values[i] = repulsive_value(sdf.values[i], xi, d0, d_clamp);
  }
  return out;
}

HumanoidField build_field(const voxel::OccupancyGrid& grid,
                          const Eigen::Vector3d& goal,
                          const FieldParams& params) {
  params.validate();
  HumanoidField f;
  f.goal = goal;
  f.params = params;
  const auto sources = goal_sources(grid, goal, params.goal_shape);
  f.geodesic = geodesic_field(grid, sources);
  f.sdf = voxel::signed_distance(grid);

  const voxel::ScalarField att = attractive_potential(f.geodesic, params.eta);
  const voxel::ScalarField rep =
      repulsive_potential(f.sdf, params.xi, params.d0, params.d_clamp);
  voxel::ScalarField u(grid.spec, voxel::kSentinel);
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    if (!voxel::is_sentinel(att.values[i])) {
      u.values[i] = att.values[i] + rep.values[i];
    }
  }
  const double slope = params.eta > 0.0 ? params.eta : 1.0;
  f.potential = voxel::fill_sentinel(u, slope);

  f.guidance = voxel::gradient_central(f.potential);
  for (auto& v : f.guidance.vectors) v = -v;
  f.sdf_grad = voxel::gradient_central(voxel::fill_sentinel(f.sdf, 1.0));
  return f;
}

double priority_w0(const BodyPartState& part) { return part.is_root ? 1.0 : 0.5; }

double priority_w1(const BodyPartState& part, const voxel::ScalarField& sdf,
                   const voxel::VectorField& sdf_grad, double lambda) {
  const double d = voxel::sample_trilinear(sdf, part.position);
  const Eigen::Vector3d grad = voxel::sample_trilinear(sdf_grad, part.position);
  if (d == voxel::kSentinel) return 0.0;
  const double approach = -grad.dot(part.velocity);
  return lambda * std::max(approach, 0.5) * std::exp(-d);
}

FieldQuery query_humanoid_pf(const HumanoidField& field,
                             const BodyPartState& part,
                             const QueryOptions& options) {
  FieldQuery q;
  q.part = part;
  const Eigen::Vector3d force =
      voxel::sample_trilinear(field.guidance, part.position);
  q.w0 = priority_w0(part);
  q.w1 = options.constant_w1
             ? options.w1_value
             : priority_w1(part, field.sdf, field.sdf_grad, field.params.lambda);
  const double norm = force.norm();
  if (!(norm > field.params.eps_norm)) {
    q.f_h.setZero();
    q.mu = Eigen::Vector3d::UnitX();
    q.kappa = 0.0;
    return q;
  }
  q.mu = force / norm;
  q.f_h = q.w0 * q.w1 * q.mu;
  q.kappa = field.params.kappa_max * q.w0 * q.w1;
  return q;
}

std::vector<double> obs_field(const HumanoidField& field,
                              std::span<const BodyPartState> parts,
                              std::size_t expected_parts) {
  if (parts.size() != expected_parts) {
    throw ArityError("obs_field expects " + std::to_string(expected_parts) +
                     " parts, got " + std::to_string(parts.size()));
  }
  std::vector<const BodyPartState*> by_id(expected_parts, nullptr);
  for (const BodyPartState& p : parts) {
    if (p.id < 0 || static_cast<std::size_t>(p.id) >= expected_parts ||
        by_id[p.id] != nullptr) {
      throw ArityError("part ids must be a permutation of 0..K-1");
    }
    by_id[p.id] = &p;
  }
  std::vector<double> out;
  out.reserve(3 * expected_parts);
  for (const BodyPartState* p : by_id) {
    const FieldQuery q = query_humanoid_pf(field, *p);
    out.insert(out.end(), {q.f_h.x(), q.f_h.y(), q.f_h.z()});
  }
  return out;
}

}  // namespace fieldnav::field
