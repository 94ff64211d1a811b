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

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fieldnav/errors.hpp"
#include "fieldnav/field/humanoid_field.hpp"

namespace fieldnav::field {
namespace {

struct Neighbor {
  int di, dj, dk;
  std::ptrdiff_t offset;
  double weight;
};

std::array<Neighbor, 26> neighborhood(const voxel::GridSpec& s) {
  std::array<Neighbor, 26> out{};
  const double w[4] = {0.0, s.resolution, s.resolution * std::sqrt(2.0),
                       s.resolution * std::sqrt(3.0)};
  const std::ptrdiff_t sy = s.dims[0];
  const std::ptrdiff_t sz = static_cast<std::ptrdiff_t>(s.dims[0]) * s.dims[1];
  int n = 0;
  for (int dk = -1; dk <= 1; ++dk)
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        const int order = std::abs(di) + std::abs(dj) + std::abs(dk);
        if (order == 0) continue;
        out[n++] = {di, dj, dk, di + dj * sy + dk * sz, w[order]};
      }
  return out;
}

}  // namespace

std::vector<std::size_t> goal_sources(const voxel::OccupancyGrid& grid,
                                      const Eigen::Vector3d& goal,
                                      GoalShape shape) {
  const voxel::GridSpec& s = grid.spec;
  const voxel::Index3 c = s.cell_of(goal);
  if (!s.in_bounds(c)) {
    throw InvalidGoalError("goal lies outside the grid");
  }
  if (grid.at(c)) {
    throw InvalidGoalError("goal lies inside an obstacle");
  }
  std::vector<std::size_t> out;
  if (shape == GoalShape::kPoint) {
    out.push_back(s.index(c));
    return out;
  }
  for (int k = 0; k < s.dims[2]; ++k) {
    if (!grid.at(c[0], c[1], k)) out.push_back(s.index(c[0], c[1], k));
  }
  return out;
}

voxel::ScalarField geodesic_field(const voxel::OccupancyGrid& grid,
                                  const Eigen::Vector3d& goal) {
  const auto sources = goal_sources(grid, goal, GoalShape::kPoint);
  return geodesic_field(grid, sources);
}

voxel::ScalarField geodesic_field(const voxel::OccupancyGrid& grid,
                                  std::span<const std::size_t> sources) {
  const voxel::GridSpec& s = grid.spec;
  voxel::ScalarField dist(s, voxel::kSentinel);
  const auto nbrs = neighborhood(s);

  // Dijkstra with one FIFO per edge class (plus one for the sources).
  // Nodes settle in nondecreasing distance, so each FIFO receives
  // nondecreasing keys and its front is its minimum; the smallest front
  // is the global minimum.
  struct Entry {
    double key;
    std::size_t idx;
  };
  std::array<std::vector<Entry>, 4> fifo;
  std::array<std::size_t, 4> head{};
  for (std::size_t src : sources) {
    if (src >= s.size() || grid.occupied[src]) {
      throw InvalidGoalError("geodesic source is not a free voxel");
    }
    dist.values[src] = 0.0;
    fifo[0].push_back({0.0, src});
  }
  std::array<int, 26> cls{};
  for (int n = 0; n < 26; ++n) {
    cls[n] = std::abs(nbrs[n].di) + std::abs(nbrs[n].dj) + std::abs(nbrs[n].dk);
  }
  std::vector<std::uint8_t> done(s.size(), 0);
  const int nx = s.dims[0], ny = s.dims[1], nz = s.dims[2];

  for (;;) {
    int q = -1;
    for (int c = 0; c < 4; ++c) {
      if (head[c] < fifo[c].size() &&
          (q < 0 || fifo[c][head[c]].key < fifo[q][head[q]].key)) {
        q = c;
      }
    }
    if (q < 0) break;
    const auto [d, idx] = fifo[q][head[q]++];
    if (done[idx]) continue;
    done[idx] = 1;
    const voxel::Index3 c = s.coords(idx);
    const bool interior = c[0] > 0 && c[1] > 0 && c[2] > 0 && c[0] < nx - 1 &&
                          c[1] < ny - 1 && c[2] < nz - 1;
    for (int m = 0; m < 26; ++m) {
      const Neighbor& nb = nbrs[m];
      if (!interior) {
        const int i = c[0] + nb.di, j = c[1] + nb.dj, k = c[2] + nb.dk;
        if (i < 0 || j < 0 || k < 0 || i >= nx || j >= ny || k >= nz) continue;
      }
      const std::size_t n = static_cast<std::size_t>(
          static_cast<std::ptrdiff_t>(idx) + nb.offset);
      if (done[n] || grid.occupied[n]) continue;
      const double cand = d + nb.weight;
      if (cand < dist.values[n]) {
        dist.values[n] = cand;
        fifo[cls[m]].push_back({cand, n});
      }
    }
  }
  return dist;
}

}  // namespace fieldnav::field
