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

// Exact squared Euclidean distance transform by separable lower envelopes
// of parabolas (Felzenszwalb & Huttenlocher), one pass per axis.

#include <cmath>
#include <cstdint>
#include <vector>

#include "fieldnav/voxel/ops.hpp"

namespace fieldnav::voxel {
namespace {

constexpr std::int64_t kInf = -1;

// In-place 1D transform over `n` samples spaced by `stride` in `data`.
// kInf marks samples with no site. Scratch buffers are reused across lines.
void transform_line(std::int64_t* data, int n, std::size_t stride,
                    std::vector<std::int64_t>& f, std::vector<int>& v,
                    std::vector<double>& z) {
  f.resize(n);
  v.resize(n);
  z.resize(n + 1);
  int sites = 0;
  for (int q = 0; q < n; ++q) {
    f[q] = data[q * stride];
    if (f[q] != kInf) ++sites;
  }
  if (sites == 0) return;

  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    const double fq = static_cast<double>(f[q]) + static_cast<double>(q) * q;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -HUGE_VAL;
      z[1] = HUGE_VAL;
      continue;
    }
    // z[0] is -inf, so the loop always stops at k == 0.
    double s;
    while (true) {
      const int p = v[k];
      const double fp = static_cast<double>(f[p]) + static_cast<double>(p) * p;
      s = (fq - fp) / (2.0 * (q - p));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = HUGE_VAL;
  }

  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const std::int64_t dq = q - v[j];
    data[q * stride] = f[v[j]] + dq * dq;
  }
}

}  // namespace

std::vector<std::int64_t> squared_distance_to(const OccupancyGrid& grid,
                                              bool target) {
  const GridSpec& s = grid.spec;
  const int nx = s.dims[0], ny = s.dims[1], nz = s.dims[2];
  std::vector<std::int64_t> d(s.size());
  const std::uint8_t want = target ? 1 : 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = grid.occupied[i] == want ? 0 : kInf;
  }

  std::vector<std::int64_t> f;
  std::vector<int> v;
  std::vector<double> z;
  const std::size_t sx = 1, sy = static_cast<std::size_t>(nx),
                    sz = static_cast<std::size_t>(nx) * ny;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j) transform_line(&d[s.index(0, j, k)], nx, sx, f, v, z);
  for (int k = 0; k < nz; ++k)
    for (int i = 0; i < nx; ++i) transform_line(&d[s.index(i, 0, k)], ny, sy, f, v, z);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) transform_line(&d[s.index(i, j, 0)], nz, sz, f, v, z);
  return d;
}

ScalarField signed_distance(const OccupancyGrid& grid) {
  const auto to_occupied = squared_distance_to(grid, true);
  const auto to_free = squared_distance_to(grid, false);
  ScalarField out(grid.spec, 0.0);
  const double res = grid.spec.resolution;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (grid.occupied[i]) {
      out.values[i] = to_free[i] == kInf
                          ? -kSentinel
                          : -res * std::sqrt(static_cast<double>(to_free[i]));
    } else {
      out.values[i] = to_occupied[i] == kInf
                          ? kSentinel
                          : res * std::sqrt(static_cast<double>(to_occupied[i]));
    }
  }
  return out;
}

}  // namespace fieldnav::voxel
