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

#include "fieldnav/voxel/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include "fieldnav/errors.hpp"

namespace fieldnav::voxel {

OccupancyGrid rasterize_boxes(const GridSpec& spec,
                              std::span<const OrientedBox> boxes,
                              std::size_t voxel_budget) {
  spec.validate();
  if (spec.size() > voxel_budget) {
    throw CapacityError("grid of " + std::to_string(spec.size()) +
                        " voxels exceeds budget of " +
                        std::to_string(voxel_budget));
  }
  OccupancyGrid grid(spec);
  for (const OrientedBox& box : boxes) {
    box.validate();
    const Eigen::Vector3d half = box.aabb_half_extents();
    const Index3 lo = spec.cell_of(box.center - half);
    const Index3 hi = spec.cell_of(box.center + half);
    for (int k = std::max(lo[2], 0); k <= std::min(hi[2], spec.dims[2] - 1); ++k)
      for (int j = std::max(lo[1], 0); j <= std::min(hi[1], spec.dims[1] - 1); ++j)
        for (int i = std::max(lo[0], 0); i <= std::min(hi[0], spec.dims[0] - 1); ++i) {
          if (box.contains(spec.cell_center(i, j, k))) grid.set(i, j, k, true);
        }
  }
  return grid;
}

ScalarField fill_sentinel(const ScalarField& field, double slope) {
  double max_finite = -HUGE_VAL;
  for (double v : field.values) {
    if (!is_sentinel(v)) max_finite = std::max(max_finite, v);
  }
  ScalarField out = field;
  if (max_finite == -HUGE_VAL) {
    std::fill(out.values.begin(), out.values.end(), 0.0);
    return out;
  }
  const double fill = max_finite + 10.0 * field.spec.resolution * slope;
  for (double& v : out.values) {
    if (is_sentinel(v)) v = fill;
  }
  return out;
}

namespace {

struct Stencil {
  Index3 lo;
  Index3 hi;
  Eigen::Vector3d t;  // weight of `hi` along each axis
};

Stencil locate(const GridSpec& spec, const Eigen::Vector3d& x) {
  if (!spec.in_sampling_box(x)) {
    throw DomainError("trilinear query outside sampling box", x);
  }
  const Eigen::Vector3d c = spec.continuous_index(x);
  Stencil st;
  for (int a = 0; a < 3; ++a) {
    const int n = spec.dims[a];
    double ca = std::clamp(c[a], 0.0, static_cast<double>(n - 1));
    // Snap to the node so cell-center queries reproduce stored values.
    const double r = std::round(ca);
    if (std::abs(ca - r) < 1e-9) ca = r;
    if (n == 1) {
      st.lo[a] = st.hi[a] = 0;
      st.t[a] = 0.0;
      continue;
    }
    int i0 = static_cast<int>(std::floor(ca));
    i0 = std::clamp(i0, 0, n - 2);
    st.lo[a] = i0;
    st.hi[a] = i0 + 1;
    st.t[a] = ca - i0;
  }
  return st;
}

template <typename Value>
Value lerp(const Value& a, const Value& b, double t) {
  // End points are returned as stored so an infinite corner never meets a
  // zero weight, and equal corners come back exactly.
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  if constexpr (std::is_same_v<Value, double>) {
    if (a == b) return a;
  }
  return a + t * (b - a);
}

// Nested lerps along x, then y, then z.
template <typename Value, typename Get>
Value blend(const Stencil& st, Get get) {
  Value yz[4];
  for (int c = 0; c < 4; ++c) {
    const int j = (c & 1) ? st.hi[1] : st.lo[1];
    const int k = (c & 2) ? st.hi[2] : st.lo[2];
    yz[c] = lerp<Value>(get(Index3{st.lo[0], j, k}), get(Index3{st.hi[0], j, k}), st.t[0]);
  }
  const Value z0 = lerp(yz[0], yz[1], st.t[1]);
  const Value z1 = lerp(yz[2], yz[3], st.t[1]);
  return lerp(z0, z1, st.t[2]);
}

}  // namespace

double sample_trilinear(const ScalarField& field, const Eigen::Vector3d& x) {
  const Stencil st = locate(field.spec, x);
  return blend<double>(st, [&](const Index3& c) { return field.at(c); });
}

Eigen::Vector3d sample_trilinear(const VectorField& field,
                                 const Eigen::Vector3d& x) {
  const Stencil st = locate(field.spec, x);
  return blend<Eigen::Vector3d>(st, [&](const Index3& c) -> Eigen::Vector3d { return field.at(c); });
}

VectorField gradient_central(const ScalarField& field) {
  const GridSpec& s = field.spec;
  VectorField out(s);
  const double h = s.resolution;
  for (int k = 0; k < s.dims[2]; ++k)
    for (int j = 0; j < s.dims[1]; ++j)
      for (int i = 0; i < s.dims[0]; ++i) {
        const Index3 c{i, j, k};
        Eigen::Vector3d g;
        for (int a = 0; a < 3; ++a) {
          const int n = s.dims[a];
          if (n == 1) {
            g[a] = 0.0;
            continue;
          }
          Index3 m = c, p = c;
          double span = 2.0 * h;
          if (c[a] == 0) {
            p[a] = 1;
            span = h;
          } else if (c[a] == n - 1) {
            m[a] = n - 2;
            span = h;
          } else {
            --m[a];
            ++p[a];
          }
          g[a] = (field.at(p) - field.at(m)) / span;
        }
        out.vectors[s.index(c)] = g;
      }
  return out;
}

namespace {

// Offsets of length <= r + 1/2, i.e. integer |z|^2 <= r^2 + r.
std::int64_t ball_limit(int r) { return static_cast<std::int64_t>(r) * r + r; }

}  // namespace

OccupancyGrid morph_dilate(const OccupancyGrid& grid, int radius_vox) {
  if (radius_vox < 0) throw ValidationError("morphology radius must be >= 0");
  if (radius_vox == 0) return grid;
  const auto d2 = squared_distance_to(grid, true);
  const std::int64_t r2 = ball_limit(radius_vox);
  OccupancyGrid out(grid.spec);
  for (std::size_t i = 0; i < d2.size(); ++i) {
    out.occupied[i] = (d2[i] >= 0 && d2[i] <= r2) ? 1 : 0;
  }
  return out;
}

OccupancyGrid morph_erode(const OccupancyGrid& grid, int radius_vox) {
  if (radius_vox < 0) throw ValidationError("morphology radius must be >= 0");
  if (radius_vox == 0) return grid;
  // Erosion is the complement of dilating the complement.
  const auto d2 = squared_distance_to(grid, false);
  const std::int64_t r2 = ball_limit(radius_vox);
  OccupancyGrid out(grid.spec);
  for (std::size_t i = 0; i < d2.size(); ++i) {
    out.occupied[i] = (d2[i] >= 0 && d2[i] <= r2) ? 0 : 1;
  }
  return out;
}

OccupancyGrid morph_close(const OccupancyGrid& grid, int radius_vox) {
  return morph_erode(morph_dilate(grid, radius_vox), radius_vox);
}

OccupancyGrid morph_open(const OccupancyGrid& grid, int radius_vox) {
  return morph_dilate(morph_erode(grid, radius_vox), radius_vox);
}

}  // namespace fieldnav::voxel
