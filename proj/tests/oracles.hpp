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

// Slow, obviously-correct reference implementations used by the tests and
// the acceptance suite. None of these share code with the library.

#ifndef FIELDNAV_TESTS_ORACLES_HPP_
#define FIELDNAV_TESTS_ORACLES_HPP_

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "fieldnav/voxel/box.hpp"
#include "fieldnav/voxel/grid.hpp"

namespace oracle {

using fieldnav::voxel::GridSpec;
using fieldnav::voxel::OccupancyGrid;

// Exhaustive nearest-voxel scan; -1 where no voxel has the target value.
std::vector<std::int64_t> brute_sqdist(const OccupancyGrid& grid, bool target);

// Ball structuring element by direct offset enumeration: offsets whose
// length is at most radius + 1/2. Out-of-grid voxels are ignored.
OccupancyGrid brute_dilate(const OccupancyGrid& grid, int radius);
OccupancyGrid brute_erode(const OccupancyGrid& grid, int radius);
// Same with offsets of length at most `radius` voxels.
OccupancyGrid brute_dilate_exact(const OccupancyGrid& grid, double radius);

// Textbook Dijkstra with an ordered set and decrease-key, 26-connected.
// +inf for unreachable or occupied voxels.
std::vector<double> reference_dijkstra(const OccupancyGrid& grid,
                                       std::size_t source);

// Bernoulli(fill) occupancy.
OccupancyGrid random_grid(const GridSpec& spec, double fill, std::mt19937_64& rng);

// Monte-Carlo integral of f over the unit sphere with one jittered sample
// per (z, phi) stratum. Uniform z is uniform area (Archimedes), so each
// stratum has equal measure 4 pi / (nz * nphi).
double sphere_integral(const std::function<double(const Eigen::Vector3d&)>& f,
                       int nz, int nphi, std::mt19937_64& rng);

// Distance from p to a box surface sampled on an n x n lattice per face.
// Overestimates the exact outside distance by at most the lattice
// half-diagonal. Points inside the box give 0.
double sampled_box_distance(const fieldnav::OrientedBox& box, const Eigen::Vector3d& p,
                            int n);

// 2D disc dilation of a row-major nx x ny mask by direct offset scan.
// Cells outside the mask count as set.
std::vector<std::uint8_t> brute_dilate_2d(const std::vector<std::uint8_t>& mask, int nx,
                                          int ny, double radius_cells);

// Uniformly distributed unit vector.
Eigen::Vector3d random_unit(std::mt19937_64& rng);

}  // namespace oracle

#endif  // FIELDNAV_TESTS_ORACLES_HPP_
