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

#include "fieldnav/vmf/vmf.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fieldnav/errors.hpp"

namespace fieldnav::vmf {

MotionSample motion_from_velocity(const Eigen::Vector3d& velocity,
                                  double speed_floor) {
  MotionSample m;
  const double speed = velocity.norm();
  if (speed >= speed_floor && std::isfinite(speed)) {
    m.v_hat = velocity / speed;
    m.valid = true;
  }
  return m;
}

double log_c3(double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw DomainError("log_c3 needs a finite kappa >= 0, got " +
                      std::to_string(kappa));
  }
  const double log_4pi = std::log(4.0 * std::numbers::pi);
  if (kappa < 1e-4) {
    // log(k / sinh k) = -k^2/6 + k^4/180 - ...
    const double k2 = kappa * kappa;
    return -log_4pi - k2 / 6.0 + k2 * k2 / 180.0;
  }
  if (kappa > 30.0) {
    // sinh k = e^k (1 - e^{-2k}) / 2
    return std::log(kappa) - kappa - std::log(2.0 * std::numbers::pi) -
           std::log1p(-std::exp(-2.0 * kappa));
  }
  return std::log(kappa) - log_4pi - std::log(std::sinh(kappa));
}

double vmf_log_density(const VmfPrior& prior, const Eigen::Vector3d& v_hat) {
  constexpr double kUnitTol = 1e-6;
  if (std::abs(v_hat.norm() - 1.0) > kUnitTol) {
    throw ValidationError("v_hat must be unit norm");
  }
  if (prior.kappa > 0.0 && std::abs(prior.mu.norm() - 1.0) > kUnitTol) {
    throw ValidationError("mu must be unit norm when kappa > 0");
  }
  const double lc = log_c3(prior.kappa);
  if (prior.kappa == 0.0) return lc;
  return lc + prior.kappa * prior.mu.dot(v_hat);
}

VmfPrior derive_prior(const field::FieldQuery& query, double kappa_max) {
  VmfPrior p;
  const double norm = query.f_h.norm();
  if (norm > 0.0) {
    p.mu = query.f_h / norm;
    p.kappa = kappa_max * norm;
  }
  return p;
}

double r_field(std::span<const VmfPrior> priors,
               std::span<const MotionSample> motion) {
  if (priors.size() != motion.size()) {
    throw ArityError("r_field: " + std::to_string(priors.size()) +
                     " priors vs " + std::to_string(motion.size()) +
                     " motion samples");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < priors.size(); ++k) {
    total += motion[k].valid ? vmf_log_density(priors[k], motion[k].v_hat)
                             : log_c3(priors[k].kappa);
  }
  return total;
}

}  // namespace fieldnav::vmf
