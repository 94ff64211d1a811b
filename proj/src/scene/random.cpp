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

#include "fieldnav/scene/random.hpp"

#include <cmath>
#include <numbers>

namespace fieldnav::scene {

StreamRng::StreamRng(std::uint64_t seed, Stream stream, std::uint64_t attempt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(attempt),
                    static_cast<std::uint32_t>(attempt >> 32)};
  engine_.seed(seq);
}

std::uint64_t StreamRng::below(std::uint64_t n) {
  if (n <= 1) return 0;
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

Eigen::Matrix3d uniform_rotation(double u1, double u2, double u3) {
  const double theta = 2.0 * std::numbers::pi * u1;
  const double phi = 2.0 * std::numbers::pi * u2;
  const double r = std::sqrt(u3);
  const Eigen::Vector3d v(std::cos(phi) * r, std::sin(phi) * r,
                          std::sqrt(1.0 - u3));
  Eigen::Matrix3d rz;
  rz << std::cos(theta), std::sin(theta), 0.0,  //
      -std::sin(theta), std::cos(theta), 0.0,   //
      0.0, 0.0, 1.0;
  const Eigen::Matrix3d householder =
      Eigen::Matrix3d::Identity() - 2.0 * v * v.transpose();
  return -householder * rz;
}

Eigen::Matrix3d uniform_rotation(StreamRng& rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  const double u3 = rng.uniform();
  return uniform_rotation(u1, u2, u3);
}

}  // namespace fieldnav::scene
