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

#include "fieldnav/voxel/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "fieldnav/errors.hpp"

namespace fieldnav::voxel {
namespace {

static_assert(std::endian::native == std::endian::little,
              "dump encoding assumes a little-endian host");

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(in[at + b]) << (8 * b);
  return v;
}

float get_f32(const std::vector<std::uint8_t>& in, std::size_t at) {
  return std::bit_cast<float>(get_u32(in, at));
}

std::vector<std::uint8_t> header(const GridSpec& s, std::size_t payload) {
  std::vector<std::uint8_t> out;
  out.reserve(kDumpHeaderBytes + payload);
  for (char c : {'V', 'X', 'F', '1'}) out.push_back(static_cast<std::uint8_t>(c));
  for (int d : s.dims) put_u32(out, static_cast<std::uint32_t>(d));
  put_f32(out, static_cast<float>(s.resolution));
  for (int a = 0; a < 3; ++a) put_f32(out, static_cast<float>(s.origin[a]));
  return out;
}

}  // namespace

std::vector<std::uint8_t> encode(const OccupancyGrid& grid) {
  auto out = header(grid.spec, grid.occupied.size());
  out.insert(out.end(), grid.occupied.begin(), grid.occupied.end());
  return out;
}

std::vector<std::uint8_t> encode(const ScalarField& field) {
  auto out = header(field.spec, 4 * field.values.size());
  for (double v : field.values) put_f32(out, static_cast<float>(v));
  return out;
}

std::vector<std::uint8_t> encode(const VectorField& field) {
  auto out = header(field.spec, 12 * field.vectors.size());
  for (const auto& v : field.vectors)
    for (int a = 0; a < 3; ++a) put_f32(out, static_cast<float>(v[a]));
  return out;
}

AnyField decode(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kDumpHeaderBytes ||
      std::memcmp(bytes.data(), "VXF1", 4) != 0) {
    throw ValidationError("not a VXF1 dump");
  }
  GridSpec spec;
  for (int a = 0; a < 3; ++a) spec.dims[a] = static_cast<int>(get_u32(bytes, 4 + 4 * a));
  spec.resolution = get_f32(bytes, 16);
  for (int a = 0; a < 3; ++a) spec.origin[a] = get_f32(bytes, 20 + 4 * a);
  spec.validate();

  const std::size_t n = spec.size();
  const std::size_t payload = bytes.size() - kDumpHeaderBytes;
  const std::uint8_t* p = bytes.data() + kDumpHeaderBytes;
  if (payload == n) {
    OccupancyGrid g(spec);
    std::copy(p, p + n, g.occupied.begin());
    return g;
  }
  if (payload == 4 * n) {
    ScalarField f(spec, 0.0);
    for (std::size_t i = 0; i < n; ++i) f.values[i] = get_f32(bytes, kDumpHeaderBytes + 4 * i);
    return f;
  }
  if (payload == 12 * n) {
    VectorField f(spec);
    for (std::size_t i = 0; i < n; ++i)
      for (int a = 0; a < 3; ++a)
        f.vectors[i][a] = get_f32(bytes, kDumpHeaderBytes + 12 * i + 4 * a);
    return f;
  }
  throw ValidationError("VXF1 payload of " + std::to_string(payload) +
                        " bytes matches no field kind");
}

void write_file(const std::filesystem::path& path,
                const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace fieldnav::voxel
