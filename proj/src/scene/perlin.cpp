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

#include "fieldnav/scene/perlin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fieldnav/errors.hpp"
#include "fieldnav/scene/random.hpp"

namespace fieldnav::scene {
namespace {

// Eight unit gradients at 45 degree spacing.
constexpr double kDiag = std::numbers::sqrt2 / 2.0;
constexpr double kGrad[8][2] = {{1, 0},      {kDiag, kDiag},   {0, 1},
                                {-kDiag, kDiag}, {-1, 0}, {-kDiag, -kDiag},
                                {0, -1},     {kDiag, -kDiag}};

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

}  // namespace

void PerlinConfig::validate() const {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw ValidationError("perlin amplitude must be >= 0");
  }
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw ValidationError("perlin cell_size must be > 0");
  }
  if (octaves < 1) throw ValidationError("perlin octaves must be >= 1");
}

Perlin2::Perlin2(std::uint64_t seed, std::uint64_t lane) {
  StreamRng rng(seed, Stream::kPerlin, lane);
  std::array<std::uint8_t, 256> p;
  for (int i = 0; i < 256; ++i) p[i] = static_cast<std::uint8_t>(i);
  for (int i = 255; i > 0; --i) {
    std::swap(p[i], p[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }
  for (int i = 0; i < 512; ++i) perm_[i] = p[i & 255];
}

double Perlin2::corner(int ix, int iy, double dx, double dy) const {
  const int h = perm_[perm_[ix & 255] + (iy & 255)] & 7;
  return kGrad[h][0] * dx + kGrad[h][1] * dy;
}

double Perlin2::noise(double x, double y) const {
  const double fx = std::floor(x), fy = std::floor(y);
  const int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
  const double dx = x - fx, dy = y - fy;
  const double u = fade(dx), v = fade(dy);
  const double n00 = corner(ix, iy, dx, dy);
  const double n10 = corner(ix + 1, iy, dx - 1.0, dy);
  const double n01 = corner(ix, iy + 1, dx, dy - 1.0);
  const double n11 = corner(ix + 1, iy + 1, dx - 1.0, dy - 1.0);
  const double a = n00 + u * (n10 - n00);
  const double b = n01 + u * (n11 - n01);
  // Unit gradients bound the raw value by sqrt(2)/2.
  return std::clamp(std::numbers::sqrt2 * (a + v * (b - a)), -1.0, 1.0);
}

double Perlin2::fractal(double x, double y, double cell_size,
                        int octaves) const {
  double sum = 0.0, norm = 0.0, amp = 1.0, freq = 1.0 / cell_size;
  for (int o = 0; o < octaves; ++o) {
    sum += amp * noise(x * freq, y * freq);
    norm += amp;
    amp *= 0.5;
    freq *= 2.0;
  }
  return std::clamp(sum / norm, -1.0, 1.0);
}

double perlin2(double x, double y, std::uint64_t seed, double cell_size,
               int octaves) {
  PerlinConfig{0.0, cell_size, octaves}.validate();
  return Perlin2(seed, 0).fractal(x, y, cell_size, octaves);
}

}  // namespace fieldnav::scene
