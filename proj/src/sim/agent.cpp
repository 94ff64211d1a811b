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

#include "fieldnav/sim/agent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fieldnav/errors.hpp"
#include "fieldnav/voxel/ops.hpp"

namespace fieldnav::sim {
namespace {

struct Sum {
  Eigen::Vector3d f = Eigen::Vector3d::Zero();
  double w = 0.0;
};

// Sums over the parts selected by `pick`, adding each left/right pair
// before it joins the total so mirrored contributions cancel first.
template <typename Pick>
Sum group_sum(const AgentModel& model, const std::vector<Eigen::Vector3d>& f,
              const std::vector<double>& w, Pick pick) {
  Sum s;
  for (int k = 0; k < model.size(); ++k) {
    const PartSpec& p = model.parts[k];
    if (!pick(k, p)) continue;
    if (p.mirror < 0) {
      s.f += f[k];
      s.w += w[k];
    } else if (p.mirror > k) {
      s.f += f[k] + f[p.mirror];
      s.w += w[k] + w[p.mirror];
    }
  }
  return s;
}

Eigen::Vector2d forward_axis(double heading) { return {std::cos(heading), std::sin(heading)}; }
Eigen::Vector2d left_axis(double heading) { return {-std::sin(heading), std::cos(heading)}; }

double clamp1(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

std::vector<PartSpec> humanoid_parts() {
  auto part = [](const char* name, double x, double y, double z, double r) {
    PartSpec p;
    p.name = name;
    p.offset = Eigen::Vector3d(x, y, z);
    p.radius = r;
    return p;
  };
  std::vector<PartSpec> parts = {
      part("pelvis", 0.0, 0.0, 0.65, 0.12),
      part("torso", 0.0, 0.0, 0.95, 0.12),
      part("head", 0.0, 0.0, 1.3, 0.08),
      part("shoulder_l", 0.0, 0.15, 1.08, 0.06),
      part("shoulder_r", 0.0, -0.15, 1.08, 0.06),
      part("hand_l", 0.0, 0.17, 0.75, 0.05),
      part("hand_r", 0.0, -0.17, 0.75, 0.05),
      part("hip_l", 0.0, 0.1, 0.6, 0.07),
      part("hip_r", 0.0, -0.1, 0.6, 0.07),
      part("knee_l", 0.0, 0.1, 0.35, 0.06),
      part("knee_r", 0.0, -0.1, 0.35, 0.06),
      part("foot_l", 0.0, 0.1, 0.1, 0.06),
      part("foot_r", 0.0, -0.1, 0.1, 0.06),
  };
  for (int k = 3; k < 13; k += 2) {
    parts[k].mirror = k + 1;
    parts[k + 1].mirror = k;
  }
  for (int k : {1, 2, 3, 4}) parts[k].upper = true;
  for (int k : {1, 3, 4, 5, 6}) parts[k].mid = true;
  for (int k : {9, 10, 11, 12}) parts[k].lower = true;
  parts[9].lift_weight = parts[10].lift_weight = 0.5;
  parts[11].lift_weight = parts[12].lift_weight = 1.0;
  return parts;
}

void AgentModel::validate() const {
  if (parts.empty()) throw ValidationError("agent model has no parts");
  if (root_index < 0 || root_index >= size()) throw ValidationError("agent root_index out of range");
  double top = 0.0;
  for (int k = 0; k < size(); ++k) {
    const PartSpec& p = parts[k];
    if (!(p.radius > 0.0)) throw ValidationError("part " + p.name + ": radius must be > 0");
    if (!p.offset.allFinite()) throw ValidationError("part " + p.name + ": bad offset");
    if (p.mirror >= size() || (p.mirror >= 0 && parts[p.mirror].mirror != k)) {
      throw ValidationError("part " + p.name + ": mirror partners must point at each other");
    }
    top = std::max(top, p.offset.z());
  }
  if (!(escape_exit >= escape_enter)) throw ValidationError("need escape_exit >= escape_enter");
  if (std::abs(top - max_height) > 1e-9) {
    throw ValidationError("top probe must sit at max_height");
  }
  if (!(min_height > 0.0 && min_height <= max_height)) {
    throw ValidationError("need 0 < min_height <= max_height");
  }
  for (double v : {max_speed, max_crouch_rate, max_lean_rate, max_lift_rate, drive_saturation}) {
    if (!(v > 0.0)) throw ValidationError("agent speeds and drive_saturation must be > 0");
  }
  for (double v : {max_lateral_offset, max_lift, crouch_gain, lean_gain, lift_gain, recover_gain,
                   escape_enter, escape_gain, escape_probe, symmetry_tolerance}) {
    if (!(v >= 0.0)) throw ValidationError("agent limits and gains must be >= 0");
  }
}

AgentState initial_state(const Eigen::Vector2d& xy, const Eigen::Vector2d& target) {
  AgentState s;
  s.root_xy = xy;
  const Eigen::Vector2d d = target - xy;
  s.heading = d.squaredNorm() > 0.0 ? std::atan2(d.y(), d.x()) : 0.0;
  return s;
}

std::vector<field::BodyPartState> derive_parts(const AgentModel& model,
                                               const AgentState& state) {
  const Eigen::Vector2d fwd = forward_axis(state.heading);
  const Eigen::Vector2d left = left_axis(state.heading);
  std::vector<field::BodyPartState> out(model.parts.size());
  for (int k = 0; k < model.size(); ++k) {
    const PartSpec& p = model.parts[k];
    const double lean_w = p.offset.z() / model.max_height;
    const Eigen::Vector2d xy =
        state.root_xy + fwd * p.offset.x() + left * (p.offset.y() + state.lean * lean_w);
    const Eigen::Vector2d vxy = state.root_velocity + left * (state.lean_rate * lean_w);
    field::BodyPartState& b = out[k];
    b.id = k;
    b.is_root = k == model.root_index;
    b.radius = p.radius;
    b.position = Eigen::Vector3d(xy.x(), xy.y(),
                                 p.offset.z() * state.height_scale + state.lift * p.lift_weight);
    b.velocity = Eigen::Vector3d(vxy.x(), vxy.y(),
                                 p.offset.z() * state.crouch_rate + state.lift_rate * p.lift_weight);
  }
  return out;
}

FollowerStep step_follower_detailed(const field::HumanoidField& field,
                                    const AgentModel& model, const AgentState& state,
                                    double dt, const FollowerOptions& options) {
  if (!(dt > 0.0 && dt <= 0.1)) {
    throw ValidationError("dt must be in (0, 0.1], got " + std::to_string(dt));
  }
  const auto parts = derive_parts(model, state);
  FollowerStep out;
  out.queries.reserve(parts.size());
  std::vector<Eigen::Vector3d> f(parts.size()), mu(parts.size());
  std::vector<double> w(parts.size()), w0(parts.size());
  const double sign = options.reverse_field ? -1.0 : 1.0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    out.queries.push_back(field::query_humanoid_pf(field, parts[k], options.query));
    const field::FieldQuery& q = out.queries.back();
    f[k] = sign * q.f_h;
    w[k] = q.w0 * q.w1;
    w0[k] = q.w0;
    mu[k].setZero();
  }

  // Whole-body consensus on the horizontal direction, weighted by w0 * w1.
  Sum all = group_sum(model, f, w, [](int, const PartSpec&) { return true; });
  Eigen::Vector2d drive = Eigen::Vector2d::Zero();
  if (all.w > 1e-12) {
    drive = all.f.head<2>() / all.w;
  } else {
    // No urgency anywhere (no obstacle in the grid): fall back on the
    // w0-weighted guidance directions.
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const Eigen::Vector3d g = voxel::sample_trilinear(field.guidance, parts[k].position);
      if (g.norm() > field.params.eps_norm) mu[k] = sign * g.normalized();
    }
    const Sum plain = group_sum(model, mu, w0, [](int, const PartSpec&) { return true; });
    if (plain.w > 0.0) drive = plain.f.head<2>() / plain.w;
  }
  // Tie-break. The side keeps its sense around the obstacle as the
  // tangent turns, so the agent orbits a corner instead of reversing.
  int escape = state.escape;
  const Eigen::Vector2d grad =
      voxel::sample_trilinear(field.sdf_grad, parts[model.root_index].position).head<2>();
  const bool has_tangent = grad.norm() > 1e-12;
  const Eigen::Vector2d tangent =
      has_tangent ? Eigen::Vector2d(-grad.y(), grad.x()).normalized() : Eigen::Vector2d::Zero();
  if (escape != 0 && (drive.norm() > model.escape_exit || !has_tangent)) {
    escape = 0;
  } else if (escape == 0 && has_tangent && drive.norm() < model.escape_enter) {
    // Take the side with the lower potential a short step ahead.
    const Eigen::Vector3d root = parts[model.root_index].position;
    Eigen::Vector3d step = Eigen::Vector3d::Zero();
    step.head<2>() = model.escape_probe * tangent;
    const double side = voxel::sample_trilinear(field.potential, root - step) -
                        voxel::sample_trilinear(field.potential, root + step);
    if (std::abs(side) > model.symmetry_tolerance) escape = side > 0.0 ? 1 : -1;
  }
  if (escape != 0) drive += escape * model.escape_gain * model.drive_saturation * tangent;

  const double drive_norm = drive.norm();
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  if (drive_norm > 0.0) {
    velocity = drive / drive_norm * model.max_speed *
               std::min(1.0, drive_norm / model.drive_saturation);
  }

  auto mean_of = [&](auto pick) {
    const Sum s = group_sum(model, f, w, pick);
    return s.w > 1e-12 ? Eigen::Vector3d(s.f / s.w) : Eigen::Vector3d::Zero();
  };
  const Eigen::Vector3d upper = mean_of([](int, const PartSpec& p) { return p.upper; });
  const Eigen::Vector3d mid = mean_of([](int, const PartSpec& p) { return p.mid; });
  const Eigen::Vector3d lower = mean_of([](int, const PartSpec& p) { return p.lower; });
  const int r = model.root_index;
  const Eigen::Vector3d root = w[r] > 1e-12 ? Eigen::Vector3d(f[r] / w[r]) : Eigen::Vector3d::Zero();

  const Eigen::Vector2d left = left_axis(state.heading);
  const double hs_min = model.min_height_scale();
  const double hs_span = std::max(1.0 - hs_min, 1e-12);

  // Crouch toward downward upper-body guidance, stand back up otherwise.
  const double crouch_cmd = clamp1(model.crouch_gain * upper.z() +
                                   model.recover_gain * (1.0 - state.height_scale) / hs_span);
  const double crouch_rate = crouch_cmd * model.max_crouch_rate / model.max_height;

  const double lateral = mid.head<2>().dot(left) - root.head<2>().dot(left);
  const double lean_cmd =
      clamp1(model.lean_gain * lateral -
             model.recover_gain * state.lean / std::max(model.max_lateral_offset, 1e-12));
  const double lean_rate = lean_cmd * model.max_lean_rate;

  const double lift_cmd = clamp1(model.lift_gain * lower.z() -
                                 model.recover_gain * state.lift / std::max(model.max_lift, 1e-12));
  const double lift_rate = lift_cmd * model.max_lift_rate;

  AgentState next = state;
  next.root_xy = state.root_xy + velocity * dt;
  next.root_velocity = velocity;
  next.height_scale = std::clamp(state.height_scale + crouch_rate * dt, hs_min, 1.0);
  next.lean = std::clamp(state.lean + lean_rate * dt, -model.max_lateral_offset,
                         model.max_lateral_offset);
  next.lift = std::clamp(state.lift + lift_rate * dt, 0.0, model.max_lift);
  // Effective rates after the limits, so part velocities match the motion.
  next.crouch_rate = (next.height_scale - state.height_scale) / dt;
  next.lean_rate = (next.lean - state.lean) / dt;
  next.lift_rate = (next.lift - state.lift) / dt;
  next.escape = escape;
  out.state = next;
  return out;
}

AgentState step_follower(const field::HumanoidField& field, const AgentModel& model,
                         const AgentState& state, double dt, const FollowerOptions& options) {
  return step_follower_detailed(field, model, state, dt, options).state;
}

double min_clearance(const voxel::ScalarField& sdf,
                     const std::vector<field::BodyPartState>& parts) {
  double best = HUGE_VAL;
  for (const auto& p : parts) {
    best = std::min(best, voxel::sample_trilinear(sdf, p.position) - p.radius);
  }
  return best;
}

bool check_collision(const voxel::ScalarField& sdf,
                     const std::vector<field::BodyPartState>& parts) {
  for (const auto& p : parts) {
    if (voxel::sample_trilinear(sdf, p.position) < p.radius) return true;
  }
  return false;
}

bool check_collision(const voxel::OccupancyGrid& grid,
                     const std::vector<field::BodyPartState>& parts) {
  return check_collision(voxel::signed_distance(grid), parts);
}

}  // namespace fieldnav::sim
