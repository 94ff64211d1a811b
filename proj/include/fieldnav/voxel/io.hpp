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

// Binary field dumps ("VXF1").
//
// Layout, all little-endian:
//   bytes  0..3   magic "VXF1"
//   bytes  4..15  u32 nx, ny, nz
//   bytes 16..19  f32 resolution
//   bytes 20..31  f32 origin x, y, z
//   payload       x fastest, then y, then z:
//                   occupancy  u8 per voxel (0 or 1)
//                   scalar     f32 per voxel (sentinels written as +/-inf)
//                   vector     3 x f32 per voxel
// The payload kind is implied by its length.

#ifndef FIELDNAV_VOXEL_IO_HPP_
#define FIELDNAV_VOXEL_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "fieldnav/voxel/grid.hpp"

namespace fieldnav::voxel {

inline constexpr std::size_t kDumpHeaderBytes = 32;

std::vector<std::uint8_t> encode(const OccupancyGrid& grid);
std::vector<std::uint8_t> encode(const ScalarField& field);
std::vector<std::uint8_t> encode(const VectorField& field);

using AnyField = std::variant<OccupancyGrid, ScalarField, VectorField>;

// Throws ValidationError on a bad magic or a payload length that matches
// no field kind.
AnyField decode(const std::vector<std::uint8_t>& bytes);

void write_file(const std::filesystem::path& path,
                const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace fieldnav::voxel

#endif  // FIELDNAV_VOXEL_IO_HPP_
