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

#ifndef FIELDNAV_VOXEL_GRID_HPP_
#define FIELDNAV_VOXEL_GRID_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Core>

namespace fieldnav::voxel {

using Index3 = std::array<int, 3>;

// Upper bound on voxels per grid unless the caller passes its own budget.
inline constexpr std::size_t kDefaultVoxelBudget = std::size_t{1} << 26;

// Metric lattice description. Cell (i, j, k) has its center at
// origin + (index + 0.5) * resolution; storage is x fastest, then y, then z.
struct GridSpec {
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  double resolution = 0.05;
  Index3 dims = {1, 1, 1};

  GridSpec() = default;
  GridSpec(const Eigen::Vector3d& o, double res, Index3 d)
      : origin(o), resolution(res), dims(d) {}

  // Throws ValidationError on a non-positive resolution or dimension.
  void validate() const;

  std::size_t size() const {
    return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims[0]) *
               (static_cast<std::size_t>(j) +
                static_cast<std::size_t>(dims[1]) * k);
  }
  std::size_t index(const Index3& c) const { return index(c[0], c[1], c[2]); }
  Index3 coords(std::size_t idx) const {
    const auto nx = static_cast<std::size_t>(dims[0]);
    const auto ny = static_cast<std::size_t>(dims[1]);
    return {static_cast<int>(idx % nx), static_cast<int>((idx / nx) % ny),
            static_cast<int>(idx / (nx * ny))};
  }
  bool in_bounds(int i, int j, int k) const {
    return i >= 0 && j >= 0 && k >= 0 && i < dims[0] && j < dims[1] &&
           k < dims[2];
  }
  bool in_bounds(const Index3& c) const { return in_bounds(c[0], c[1], c[2]); }

  Eigen::Vector3d cell_center(int i, int j, int k) const {
    return origin + resolution * Eigen::Vector3d(i + 0.5, j + 0.5, k + 0.5);
  }
  Eigen::Vector3d cell_center(const Index3& c) const {
    return cell_center(c[0], c[1], c[2]);
  }

  // Continuous index coordinates: integer values land on cell centers.
  Eigen::Vector3d continuous_index(const Eigen::Vector3d& x) const {
    return (x - origin) / resolution - Eigen::Vector3d::Constant(0.5);
  }

  // Cell containing x (may be out of bounds).
  Index3 cell_of(const Eigen::Vector3d& x) const {
    const Eigen::Vector3d c = (x - origin) / resolution;
    return {static_cast<int>(std::floor(c.x())),
            static_cast<int>(std::floor(c.y())),
            static_cast<int>(std::floor(c.z()))};
  }

  // Inside the convex hull of cell centers, where trilinear sampling is
  // defined.
  bool in_sampling_box(const Eigen::Vector3d& x) const;

  // Metric extent of the lattice (origin to far corner).
  Eigen::Vector3d extent() const {
    return resolution * Eigen::Vector3d(dims[0], dims[1], dims[2]);
  }

  bool operator==(const GridSpec& o) const {
    return origin == o.origin && resolution == o.resolution && dims == o.dims;
  }
};

struct OccupancyGrid {
  GridSpec spec;
  std::vector<std::uint8_t> occupied;

  OccupancyGrid() = default;
  explicit OccupancyGrid(const GridSpec& s) : spec(s), occupied(s.size(), 0) {}

  bool at(int i, int j, int k) const { return occupied[spec.index(i, j, k)]; }
  bool at(const Index3& c) const { return occupied[spec.index(c)]; }
  void set(int i, int j, int k, bool v) {
    occupied[spec.index(i, j, k)] = v ? 1 : 0;
  }
  std::size_t count() const;
  double fill_fraction() const {
    return occupied.empty() ? 0.0
                            : static_cast<double>(count()) / occupied.size();
  }
  bool operator==(const OccupancyGrid& o) const {
    return spec == o.spec && occupied == o.occupied;
  }
};

// Non-finite values mark unreachable/undefined voxels.
inline constexpr double kSentinel = std::numeric_limits<double>::infinity();
inline bool is_sentinel(double v) { return !std::isfinite(v); }

struct ScalarField {
  GridSpec spec;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(const GridSpec& s, double fill)
      : spec(s), values(s.size(), fill) {}

  double at(int i, int j, int k) const { return values[spec.index(i, j, k)]; }
  double at(const Index3& c) const { return values[spec.index(c)]; }
  double& at(int i, int j, int k) { return values[spec.index(i, j, k)]; }
  bool has_sentinel() const;
};

struct VectorField {
  GridSpec spec;
  std::vector<Eigen::Vector3d> vectors;

  VectorField() = default;
  explicit VectorField(const GridSpec& s)
      : spec(s), vectors(s.size(), Eigen::Vector3d::Zero()) {}

  const Eigen::Vector3d& at(int i, int j, int k) const {
    return vectors[spec.index(i, j, k)];
  }
  const Eigen::Vector3d& at(const Index3& c) const {
    return vectors[spec.index(c)];
  }
};

}  // namespace fieldnav::voxel

#endif  // FIELDNAV_VOXEL_GRID_HPP_
