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

#ifndef FIELDNAV_SCENE_PERLIN_HPP_
#define FIELDNAV_SCENE_PERLIN_HPP_

#include <array>
#include <cstdint>

namespace fieldnav::scene {

struct PerlinConfig {
  double amplitude = 0.0;  // meters of surface displacement at |noise| = 1
  double cell_size = 0.4;  // base lattice spacing [m]
  int octaves = 2;

  // Throws ValidationError on amplitude < 0, cell_size <= 0 or octaves < 1.
  void validate() const;
};

// 2D gradient noise on an integer lattice with a quintic fade. The
// permutation table is drawn from (seed, lane), so every lane is an
// independent noise function.
class Perlin2 {
 public:
  Perlin2(std::uint64_t seed, std::uint64_t lane);

  // Single octave in lattice units, in [-1, 1]; exactly 0 on lattice nodes.
  double noise(double x, double y) const;
  // Octave sum with persistence 0.5 and lacunarity 2, normalized back to
  // [-1, 1]. x and y are in meters.
  double fractal(double x, double y, double cell_size, int octaves) const;

 private:
  double corner(int ix, int iy, double dx, double dy) const;

  std::array<std::uint8_t, 512> perm_;
};

double perlin2(double x, double y, std::uint64_t seed, double cell_size,
               int octaves);

}  // namespace fieldnav::scene

#endif  // FIELDNAV_SCENE_PERLIN_HPP_
