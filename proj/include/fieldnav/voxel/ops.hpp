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

#ifndef FIELDNAV_VOXEL_OPS_HPP_
#define FIELDNAV_VOXEL_OPS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "fieldnav/voxel/box.hpp"
#include "fieldnav/voxel/grid.hpp"

namespace fieldnav::voxel {

// Marks every voxel whose center lies inside at least one box.
OccupancyGrid rasterize_boxes(const GridSpec& spec,
                              std::span<const OrientedBox> boxes,
                              std::size_t voxel_budget = kDefaultVoxelBudget);

// Squared Euclidean distance, in voxel units, from every voxel to the
// nearest voxel whose mask value equals `target`. Voxels with no such
// voxel in the grid get -1.
std::vector<std::int64_t> squared_distance_to(const OccupancyGrid& grid,
                                              bool target);

// Signed distance in meters between cell centers: positive in free space
// (to the nearest occupied cell), negative inside obstacles (to the nearest
// free cell). An all-free grid is +inf everywhere and an all-occupied grid
// is -inf everywhere.
ScalarField signed_distance(const OccupancyGrid& grid);

// Replaces non-finite voxels by (max finite value + 10 * resolution * slope)
// so that gradients point away from undefined regions. A field with no
// finite value is returned as all zeros.
ScalarField fill_sentinel(const ScalarField& field, double slope);

// Trilinear blend of the 8 surrounding cell centers. Throws DomainError
// outside the sampling box. Non-finite corners propagate.
double sample_trilinear(const ScalarField& field, const Eigen::Vector3d& x);
Eigen::Vector3d sample_trilinear(const VectorField& field,
                                 const Eigen::Vector3d& x);

// Central differences, one-sided on boundary layers; a single-cell axis has
// zero derivative.
VectorField gradient_central(const ScalarField& field);

// Structuring element is the discrete Euclidean ball of the given radius,
// digitized with rounding: offsets z with |z| <= r + 1/2. Radius 1 is the
// 18-neighborhood, so a one-voxel bump on a flat face is opened away.
// Voxels outside the grid are ignored by both primitives, which keeps
// erosion and dilation exactly dual under complement.
OccupancyGrid morph_dilate(const OccupancyGrid& grid, int radius_vox);
OccupancyGrid morph_erode(const OccupancyGrid& grid, int radius_vox);
OccupancyGrid morph_close(const OccupancyGrid& grid, int radius_vox);
OccupancyGrid morph_open(const OccupancyGrid& grid, int radius_vox);

}  // namespace fieldnav::voxel

#endif  // FIELDNAV_VOXEL_OPS_HPP_
