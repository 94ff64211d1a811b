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

#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "fieldnav/errors.hpp"
#include "fieldnav/scene/scene.hpp"

namespace fieldnav::scene {
namespace {

using nlohmann::json;

json vec(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d read_vec(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw ValidationError(std::string(what) + " must be an array of 3 numbers");
  }
  Eigen::Vector3d v;
  for (int a = 0; a < 3; ++a) {
    if (!j[a].is_number()) throw ValidationError(std::string(what) + " must be numeric");
    v[a] = j[a].get<double>();
  }
  return v;
}

void only_keys(const json& j, std::initializer_list<const char*> keys,
               const char* where) {
  if (!j.is_object()) throw ValidationError(std::string(where) + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw ValidationError(std::string("unknown key '") + item.key() + "' in " + where);
    }
  }
  for (const char* k : keys) {
    if (!j.contains(k)) throw ValidationError(std::string("missing key '") + k + "' in " + where);
  }
}

}  // namespace

voxel::GridSpec SceneManifest::grid_spec() const {
  voxel::Index3 dims;
  for (int a = 0; a < 3; ++a) {
    dims[a] = static_cast<int>(std::lround(room[a] / resolution));
  }
  voxel::GridSpec s(Eigen::Vector3d::Zero(), resolution, dims);
  s.validate();
  return s;
}

void SceneManifest::validate() const {
  if (!(difficulty >= 0.0 && difficulty <= 1.0)) {
    throw ValidationError("difficulty must be in [0, 1]");
  }
  if (!(resolution > 0.0)) throw ValidationError("resolution must be > 0");
  for (int a = 0; a < 3; ++a) {
    if (!(room[a] >= resolution)) throw ValidationError("room extents must cover a voxel");
    const double cells = room[a] / resolution;
    if (std::abs(cells - std::round(cells)) > 1e-6) {
      throw ValidationError("room extents must be whole multiples of the resolution");
    }
  }
  if (morph_radius_vox < 0) throw ValidationError("morph_radius_vox must be >= 0");
  perlin.validate();
  for (const auto& b : boxes) b.validate();
  auto inside = [&](const Eigen::Vector3d& p) {
    return (p.array() >= 0.0).all() && (p.array() <= room.array()).all();
  };
  if (!inside(start)) throw ValidationError("start lies outside the room");
  if (!inside(goal)) throw ValidationError("goal lies outside the room");
}

json to_json(const SceneManifest& m) {
  json boxes = json::array();
  for (const auto& b : m.boxes) {
    json rot = json::array();
    for (int r = 0; r < 3; ++r) {
      rot.push_back({b.rotation(r, 0), b.rotation(r, 1), b.rotation(r, 2)});
    }
    boxes.push_back({{"center", vec(b.center)},
                     {"half_extents", vec(b.half_extents)},
                     {"rotation", rot},
                     {"anchor", std::string(to_string(b.anchor))}});
  }
  return {{"scene_schema", kSceneSchema},
          {"seed", m.seed},
          {"difficulty", m.difficulty},
          {"room", vec(m.room)},
          {"resolution", m.resolution},
          {"walls", m.walls},
          {"boxes", boxes},
          {"perlin",
           {{"amplitude", m.perlin.amplitude},
            {"cell_size", m.perlin.cell_size},
            {"octaves", m.perlin.octaves}}},
          {"morph_radius_vox", m.morph_radius_vox},
          {"start", vec(m.start)},
          {"goal", vec(m.goal)}};
}

SceneManifest manifest_from_json(const json& j) {
  only_keys(j,
            {"scene_schema", "seed", "difficulty", "room", "resolution", "walls",
             "boxes", "perlin", "morph_radius_vox", "start", "goal"},
            "scene manifest");
  if (j["scene_schema"] != kSceneSchema) {
    throw ValidationError("unsupported scene_schema " + j["scene_schema"].dump());
  }
  SceneManifest m;
  try {
    m.seed = j["seed"].get<std::uint64_t>();
    m.difficulty = j["difficulty"].get<double>();
    m.room = read_vec(j["room"], "room");
    m.resolution = j["resolution"].get<double>();
    m.walls = j["walls"].get<bool>();
    m.morph_radius_vox = j["morph_radius_vox"].get<int>();
    m.start = read_vec(j["start"], "start");
    m.goal = read_vec(j["goal"], "goal");

    const json& p = j["perlin"];
    only_keys(p, {"amplitude", "cell_size", "octaves"}, "perlin");
    m.perlin.amplitude = p["amplitude"].get<double>();
    m.perlin.cell_size = p["cell_size"].get<double>();
    m.perlin.octaves = p["octaves"].get<int>();

    if (!j["boxes"].is_array()) throw ValidationError("boxes must be an array");
    for (const json& jb : j["boxes"]) {
      only_keys(jb, {"center", "half_extents", "rotation", "anchor"}, "box");
      OrientedBox b;
      b.center = read_vec(jb["center"], "box center");
      b.half_extents = read_vec(jb["half_extents"], "box half_extents");
      const json& rot = jb["rotation"];
      if (!rot.is_array() || rot.size() != 3) {
        throw ValidationError("box rotation must be 3 rows");
      }
      for (int r = 0; r < 3; ++r) b.rotation.row(r) = read_vec(rot[r], "rotation row");
      b.anchor = anchor_from_string(jb["anchor"].get<std::string>());
      m.boxes.push_back(b);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scene manifest: ") + e.what());
  }
  m.validate();
  return m;
}

std::string dump_manifest(const SceneManifest& m) { return to_json(m).dump(2) + "\n"; }

SceneManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scene file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return manifest_from_json(j);
}

}  // namespace fieldnav::scene
