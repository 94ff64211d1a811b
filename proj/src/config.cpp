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

#include "fieldnav/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <variant>
#include <vector>

#include "fieldnav/errors.hpp"

namespace fieldnav {

namespace {

using nlohmann::json;

using Slot = std::variant<double*, int*, bool*, std::uint64_t*, std::string*,
                          scene::Range*, Eigen::Vector3d*, field::GoalShape*>;

struct Entry {
  const char* section;
  const char* key;
  Slot slot;
};

// The single table behind serialization and parsing.
std::vector<Entry> entries(RunConfig& c) {
  auto& f = c.field;
  auto& a = c.agent;
  auto& s = c.scene;
  auto& r = c.rollout;
  auto& t = c.teleop;
  auto& u = c.run;
  return {
      {"field", "eta", &f.eta},
      {"field", "xi", &f.xi},
      {"field", "d0", &f.d0},
      {"field", "lambda", &f.lambda},
      {"field", "kappa_max", &f.kappa_max},
      {"field", "d_clamp", &f.d_clamp},
      {"field", "eps_norm", &f.eps_norm},
      {"field", "goal_shape", &f.goal_shape},

      {"agent", "min_height", &a.min_height},
      {"agent", "max_height", &a.max_height},
      {"agent", "max_speed", &a.max_speed},
      {"agent", "max_crouch_rate", &a.max_crouch_rate},
      {"agent", "max_lateral_offset", &a.max_lateral_offset},
      {"agent", "max_lean_rate", &a.max_lean_rate},
      {"agent", "max_lift", &a.max_lift},
      {"agent", "max_lift_rate", &a.max_lift_rate},
      {"agent", "drive_saturation", &a.drive_saturation},
      {"agent", "crouch_gain", &a.crouch_gain},
      {"agent", "lean_gain", &a.lean_gain},
      {"agent", "lift_gain", &a.lift_gain},
      {"agent", "recover_gain", &a.recover_gain},
      {"agent", "escape_enter", &a.escape_enter},
      {"agent", "escape_exit", &a.escape_exit},
      {"agent", "escape_gain", &a.escape_gain},
      {"agent", "escape_probe", &a.escape_probe},
      {"agent", "symmetry_tolerance", &a.symmetry_tolerance},

      {"scene", "room", &s.room},
      {"scene", "resolution", &s.resolution},
      {"scene", "walls", &s.walls},
      {"scene", "n_min", &s.n_min},
      {"scene", "n_max", &s.n_max},
      {"scene", "passage_width_easy", &s.passage_width_easy},
      {"scene", "passage_width_hard", &s.passage_width_hard},
      {"scene", "overhead_clearance_easy", &s.overhead_clearance_easy},
      {"scene", "overhead_clearance_hard", &s.overhead_clearance_hard},
      {"scene", "hurdle_height_easy", &s.hurdle_height_easy},
      {"scene", "hurdle_height_hard", &s.hurdle_height_hard},
      {"scene", "half_extent_easy", &s.half_extent_easy},
      {"scene", "half_extent_hard", &s.half_extent_hard},
      {"scene", "mid_center_z", &s.mid_center_z},
      {"scene", "placement_margin", &s.placement_margin},
      {"scene", "perlin_amplitude_easy", &s.perlin_amplitude_easy},
      {"scene", "perlin_amplitude_hard", &s.perlin_amplitude_hard},
      {"scene", "perlin_cell_size", &s.perlin_cell_size},
      {"scene", "perlin_octaves", &s.perlin_octaves},
      {"scene", "morph_radius_vox", &s.morph_radius_vox},
      {"scene", "walkable_radius", &s.walkable_radius},
      {"scene", "start_clearance", &s.start_clearance},
      {"scene", "height_band", &s.height_band},
      {"scene", "goal_distance", &s.goal_distance},
      {"scene", "anchor_height", &s.anchor_height},
      {"scene", "agent_radius", &s.agent_radius},
      {"scene", "body_band", &s.body_band},
      {"scene", "max_attempts", &s.max_attempts},

      {"rollout", "dt", &r.dt},
      {"rollout", "time_limit", &r.time_limit},
      {"rollout", "time_per_meter", &r.time_per_meter},
      {"rollout", "success_radius", &r.success_radius},
      {"rollout", "stall_window", &r.stall_window},
      {"rollout", "stall_distance", &r.stall_distance},
      {"rollout", "reverse_field", &r.reverse_field},
      {"rollout", "constant_w1", &r.constant_w1},
      {"rollout", "w1_value", &r.w1_value},
      {"rollout", "trial_jitter", &r.trial_jitter},

      {"teleop", "host", &t.host},
      {"teleop", "port", &t.port},
      {"teleop", "tick_period", &t.tick_period},
      {"teleop", "substeps", &t.substeps},
      {"teleop", "snap_radius", &t.snap_radius},
      {"teleop", "mask_stride", &t.mask_stride},
      {"teleop", "max_sessions", &t.max_sessions},

      {"run", "seed", &u.seed},
      {"run", "difficulty", &u.difficulty},
      {"run", "count", &u.count},
      {"run", "trials", &u.trials},
  };
}

std::string_view shape_name(field::GoalShape s) {
  return s == field::GoalShape::kColumn ? "column" : "point";
}

json write(const Slot& slot) {
  return std::visit(
      [](auto* p) -> json {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, scene::Range>) {
          return json::array({p->lo, p->hi});
        } else if constexpr (std::is_same_v<T, Eigen::Vector3d>) {
          return json::array({p->x(), p->y(), p->z()});
        } else if constexpr (std::is_same_v<T, field::GoalShape>) {
          return std::string(shape_name(*p));
        } else {
          return *p;
        }
      },
      slot);
}

void read(const json& v, const Slot& slot, const std::string& name) {
  auto bad = [&](const char* want) {
    return ConfigError(name + ": expected " + want + ", got " + v.dump());
  };
  std::visit(
      [&](auto* p) {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!v.is_number()) throw bad("a number");
          *p = v.get<double>();
        } else if constexpr (std::is_same_v<T, int>) {
          if (!v.is_number_integer()) throw bad("an integer");
          *p = v.get<int>();
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
            throw bad("a non-negative integer");
          *p = v.get<std::uint64_t>();
        } else if constexpr (std::is_same_v<T, bool>) {
          if (!v.is_boolean()) throw bad("true or false");
          *p = v.get<bool>();
        } else if constexpr (std::is_same_v<T, std::string>) {
          if (!v.is_string()) throw bad("a string");
          *p = v.get<std::string>();
        } else if constexpr (std::is_same_v<T, scene::Range>) {
          if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw bad("[lo, hi]");
          *p = {v[0].get<double>(), v[1].get<double>()};
        } else if constexpr (std::is_same_v<T, Eigen::Vector3d>) {
          if (!v.is_array() || v.size() != 3) throw bad("[x, y, z]");
          for (int a = 0; a < 3; ++a) {
            if (!v[a].is_number()) throw bad("[x, y, z]");
            (*p)[a] = v[a].get<double>();
          }
        } else if constexpr (std::is_same_v<T, field::GoalShape>) {
          if (v == "column") {
            *p = field::GoalShape::kColumn;
          } else if (v == "point") {
            *p = field::GoalShape::kPoint;
          } else {
            throw bad("\"column\" or \"point\"");
          }
        }
      },
      slot);
}

}  // namespace

void RunConfig::validate() const {
  try {
    field.validate();
    agent.validate();
    scene.validate();
    rollout.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  if (!(run.difficulty >= 0.0 && run.difficulty <= 1.0))
    throw ConfigError("run.difficulty must be in [0, 1], got " + std::to_string(run.difficulty));
  if (run.count < 1) throw ConfigError("run.count must be >= 1");
  if (run.trials < 1) throw ConfigError("run.trials must be >= 1");
  if (teleop.port < 0 || teleop.port > 65535) throw ConfigError("teleop.port out of range");
  if (!(teleop.tick_period > 0.0)) throw ConfigError("teleop.tick_period must be > 0");
  if (teleop.substeps < 1) throw ConfigError("teleop.substeps must be >= 1");
  if (!(teleop.snap_radius >= 0.0)) throw ConfigError("teleop.snap_radius must be >= 0");
  if (teleop.mask_stride < 1) throw ConfigError("teleop.mask_stride must be >= 1");
  if (teleop.max_sessions < 1) throw ConfigError("teleop.max_sessions must be >= 1");
}

nlohmann::json to_json(const RunConfig& cfg) {
  RunConfig copy = cfg;
  json out = json::object();
  for (const auto& e : entries(copy)) out[e.section][e.key] = write(e.slot);
  return out;
}

RunConfig apply_config(const nlohmann::json& j, RunConfig base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  std::map<std::string, std::map<std::string, Slot>> table;
  for (const auto& e : entries(base)) table[e.section][e.key] = e.slot;
  for (const auto& [section, body] : j.items()) {
    const auto sec = table.find(section);
    if (sec == table.end()) throw ConfigError("unknown config section '" + section + "'");
    if (!body.is_object()) throw ConfigError("config section '" + section + "' must be an object");
    for (const auto& [key, value] : body.items()) {
      const auto slot = sec->second.find(key);
      if (slot == sec->second.end())
        throw ConfigError("unknown config key '" + section + "." + key + "'");
      read(value, slot->second, section + "." + key);
    }
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse config file " + path + ": " + e.what());
  }
  return apply_config(j, std::move(base));
}

}  // namespace fieldnav
