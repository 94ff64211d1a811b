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

// von Mises-Fisher directional prior on the unit sphere in R^3 and the
// whole-body log-likelihood reward built from per-part priors.

#ifndef FIELDNAV_VMF_VMF_HPP_
#define FIELDNAV_VMF_VMF_HPP_

#include <span>
#include <vector>

#include <Eigen/Core>

#include "fieldnav/field/humanoid_field.hpp"

namespace fieldnav::vmf {

// Parts slower than this have no defined motion direction [m/s].
inline constexpr double kSpeedFloor = 1e-3;

struct VmfPrior {
  Eigen::Vector3d mu = Eigen::Vector3d::UnitX();
  double kappa = 0.0;
};

struct MotionSample {
  Eigen::Vector3d v_hat = Eigen::Vector3d::UnitX();
  bool valid = false;
};

MotionSample motion_from_velocity(const Eigen::Vector3d& velocity,
                                  double speed_floor = kSpeedFloor);

// log(kappa / (4 pi sinh kappa)), the log normalizer of the 3D density.
// Series branch below 1e-4, log-space form above 30. Throws DomainError for
// negative or non-finite kappa.
double log_c3(double kappa);

// log_c3(kappa) + kappa * mu . v_hat. Throws ValidationError when v_hat (or
// mu, for kappa > 0) is off the unit sphere by more than 1e-6.
double vmf_log_density(const VmfPrior& prior, const Eigen::Vector3d& v_hat);

VmfPrior derive_prior(const field::FieldQuery& query, double kappa_max);

// Sum over parts of the log density; parts without a valid motion sample
// contribute only log_c3(kappa). Throws ArityError on a length mismatch.
double r_field(std::span<const VmfPrior> priors,
               std::span<const MotionSample> motion);

}  // namespace fieldnav::vmf

#endif  // FIELDNAV_VMF_VMF_HPP_
