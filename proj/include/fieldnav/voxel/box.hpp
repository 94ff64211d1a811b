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

#ifndef FIELDNAV_VOXEL_BOX_HPP_
#define FIELDNAV_VOXEL_BOX_HPP_

#include <string_view>

#include <Eigen/Core>

namespace fieldnav {

// How a box relates to the room: grows from the floor, hangs from the
// ceiling, or stands free spanning the room height.
enum class Anchor { kFloor, kCeiling, kMid };

std::string_view to_string(Anchor a);
Anchor anchor_from_string(std::string_view s);

struct OrientedBox {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d half_extents = Eigen::Vector3d::Constant(0.5);
  // Columns are the box axes in world coordinates.
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Anchor anchor = Anchor::kMid;

  // Point expressed in the box frame.
  Eigen::Vector3d to_local(const Eigen::Vector3d& p) const {
    return rotation.transpose() * (p - center);
  }
  bool contains(const Eigen::Vector3d& p) const;
  // Exact signed Euclidean distance to the box surface (negative inside).
  double signed_distance(const Eigen::Vector3d& p) const;
  // Half extents of the world-axis-aligned bounding box.
  Eigen::Vector3d aabb_half_extents() const {
    return rotation.cwiseAbs() * half_extents;
  }
  // Throws ValidationError unless half extents are positive and the
  // rotation is orthonormal with determinant +1 (tolerance 1e-9).
  void validate() const;
};

}  // namespace fieldnav

#endif  // FIELDNAV_VOXEL_BOX_HPP_
