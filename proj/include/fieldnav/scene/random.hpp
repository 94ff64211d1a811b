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

#ifndef FIELDNAV_SCENE_RANDOM_HPP_
#define FIELDNAV_SCENE_RANDOM_HPP_

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace fieldnav::scene {

// Independent streams drawn from one scene seed.
enum class Stream : std::uint32_t {
  kBoxes = 1,
  kPerlin = 2,
  kStartGoal = 3,
  kTrial = 4,
  kCrop = 5,
};

// Engine keyed by (seed, stream, attempt). Distinct keys give unrelated
// sequences, so editing one stream's consumers never shifts another's.
// Conversions to doubles are done here rather than through <random>
// distributions, whose output is implementation-defined.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, Stream stream, std::uint64_t attempt = 0);

  std::uint64_t next_u64() { return engine_(); }
  // [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // [0, n)
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

// Uniform random rotation from three uniform scalars (Arvo's subgroup
// algorithm: a random z-rotation followed by a random Householder
// reflection, negated to stay in SO(3)).
Eigen::Matrix3d uniform_rotation(double u1, double u2, double u3);
Eigen::Matrix3d uniform_rotation(StreamRng& rng);

}  // namespace fieldnav::scene

#endif  // FIELDNAV_SCENE_RANDOM_HPP_
