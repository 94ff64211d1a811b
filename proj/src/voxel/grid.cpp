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

#include "fieldnav/voxel/grid.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Dense>

#include "fieldnav/errors.hpp"
#include "fieldnav/voxel/box.hpp"

namespace fieldnav::voxel {

void GridSpec::validate() const {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw ValidationError("grid resolution must be positive, got " +
                          std::to_string(resolution));
  }
  for (int d : dims) {
    if (d < 1) {
      throw ValidationError("grid dims must be >= 1, got " +
                            std::to_string(d));
    }
  }
}

bool GridSpec::in_sampling_box(const Eigen::Vector3d& x) const {
  const Eigen::Vector3d c = continuous_index(x);
  constexpr double kTol = 1e-9;
  for (int a = 0; a < 3; ++a) {
    if (!(c[a] >= -kTol && c[a] <= dims[a] - 1 + kTol)) return false;
  }
  return true;
}

std::size_t OccupancyGrid::count() const {
  return static_cast<std::size_t>(
      std::count(occupied.begin(), occupied.end(), std::uint8_t{1}));
}

bool ScalarField::has_sentinel() const {
  return std::any_of(values.begin(), values.end(),
                     [](double v) { return is_sentinel(v); });
}

}  // namespace fieldnav::voxel

namespace fieldnav {

std::string_view to_string(Anchor a) {
  switch (a) {
    case Anchor::kFloor:
      return "floor";
    case Anchor::kCeiling:
      return "ceiling";
    case Anchor::kMid:
      return "mid";
  }
  return "mid";
}

Anchor anchor_from_string(std::string_view s) {
  if (s == "floor") return Anchor::kFloor;
  if (s == "ceiling") return Anchor::kCeiling;
  if (s == "mid") return Anchor::kMid;
  throw ValidationError("unknown anchor '" + std::string(s) + "'");
}

bool OrientedBox::contains(const Eigen::Vector3d& p) const {
  const Eigen::Vector3d q = to_local(p);
  return std::abs(q.x()) <= half_extents.x() &&
         std::abs(q.y()) <= half_extents.y() &&
         std::abs(q.z()) <= half_extents.z();
}

double OrientedBox::signed_distance(const Eigen::Vector3d& p) const {
  const Eigen::Vector3d q = to_local(p).cwiseAbs() - half_extents;
  const double outside = q.cwiseMax(0.0).norm();
  const double inside = std::min(q.maxCoeff(), 0.0);
  return outside + inside;
}

void OrientedBox::validate() const {
  if (!(half_extents.array() > 0.0).all()) {
    throw ValidationError("box half extents must be positive");
  }
  const double ortho =
      (rotation.transpose() * rotation - Eigen::Matrix3d::Identity())
          .cwiseAbs()
          .maxCoeff();
  if (ortho > 1e-9 || std::abs(rotation.determinant() - 1.0) > 1e-9) {
    throw ValidationError("box rotation must be a proper rotation");
  }
}

}  // namespace fieldnav
