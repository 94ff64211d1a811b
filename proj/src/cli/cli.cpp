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

#include "fieldnav/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fieldnav/config.hpp"
#include "fieldnav/errors.hpp"
#include "fieldnav/teleop/server.hpp"
#include "fieldnav/voxel/io.hpp"
#include "fieldnav/voxel/ops.hpp"

namespace fieldnav::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Flags shared by every subcommand; unset optionals leave the config alone.
struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> difficulty;
  std::optional<int> count;
  std::optional<int> trials;
  bool reverse_field = false;
  std::string scene_path;
  std::string out;
  std::string field = "u";
  std::optional<double> z;
  std::optional<std::string> host;
  std::optional<int> port;
};

RunConfig effective(const Common& c) {
  RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
  if (c.seed) cfg.run.seed = *c.seed;
  if (c.difficulty) cfg.run.difficulty = *c.difficulty;
  if (c.count) cfg.run.count = *c.count;
  if (c.trials) cfg.run.trials = *c.trials;
  if (c.reverse_field) cfg.rollout.reverse_field = true;
  if (c.host) cfg.teleop.host = *c.host;
  if (c.port) cfg.teleop.port = *c.port;
  cfg.validate();
  return cfg;
}

void header(std::ostream& out, const std::string& command, const Common& c, const RunConfig& cfg) {
  json args = json::object();
  if (!c.scene_path.empty()) args["scene"] = c.scene_path;
  if (!c.out.empty()) args["out"] = c.out;
  if (command == "export-slice") {
    args["field"] = c.field;
    if (c.z) args["z"] = *c.z;
  }
  out << "# effective-config "
      << json{{"command", command}, {"args", args}, {"config", to_json(cfg)}}.dump() << '\n';
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
}

// The manifests a command works on: --scene, else generated from the run
// selection.
std::vector<scene::SceneManifest> scenes_for(const Common& c, const RunConfig& cfg,
                                             std::ostream& out) {
  if (!c.scene_path.empty()) {
    if (!fs::exists(c.scene_path)) throw ConfigError("scene file not found: " + c.scene_path);
    return {scene::load_manifest(c.scene_path)};
  }
  std::vector<scene::SceneManifest> v;
  for (int i = 0; i < cfg.run.count; ++i) {
    const std::uint64_t seed = cfg.run.seed + static_cast<std::uint64_t>(i);
    v.push_back(scene::generate_scene(seed, cfg.run.difficulty, cfg.scene).manifest);
    out << "# scene seed " << seed << " generated\n";
  }
  return v;
}

int gen_scene(const Common& c, std::ostream& out) {
  const RunConfig cfg = effective(c);
  header(out, "gen-scene", c, cfg);
  const fs::path dir = c.out.empty() ? fs::path(".") : fs::path(c.out);
  for (int i = 0; i < cfg.run.count; ++i) {
    const std::uint64_t seed = cfg.run.seed + static_cast<std::uint64_t>(i);
    const auto g = scene::generate_scene(seed, cfg.run.difficulty, cfg.scene);
    const fs::path base = dir / ("scene_" + std::to_string(seed));
    write_text(base.string() + ".json", scene::dump_manifest(g.manifest));
    voxel::write_file(base.string() + ".vxf", voxel::encode(g.grid));
    out << "scene " << seed << " boxes " << g.manifest.boxes.size() << " fill "
        << g.grid.fill_fraction() << " attempts " << g.attempts << " -> " << base.string()
        << ".json\n";
  }
  return kExitOk;
}

int rollout(const Common& c, std::ostream& out) {
  const RunConfig cfg = effective(c);
  header(out, "rollout", c, cfg);
  const auto scenes = scenes_for(c, cfg, out);
  const auto ev = sim::evaluate(scenes, cfg.agent, cfg.field, cfg.rollout, cfg.run.trials);
  if (!c.out.empty()) {
    const fs::path dir(c.out);
    const auto& s0 = scenes.front();
    const auto r = sim::run_rollout(s0, cfg.agent, cfg.field, cfg.rollout);
    std::ostringstream trace;
    sim::write_trace(r, trace);
    write_text(dir / "trace.jsonl", trace.str());
    write_text(dir / "summary.json", ev.to_json().dump(2) + "\n");
    write_text(dir / "summary.csv", ev.to_csv());
  }
  out << json{{"sr", ev.sr},
              {"de_mean", ev.de_mean},
              {"de_mean_success", ev.de_mean_success},
              {"scenes", scenes.size()},
              {"trials", ev.trials.size()}}
             .dump()
      << '\n';
  return kExitOk;
}

int export_slice(const Common& c, std::ostream& out) {
  const RunConfig cfg = effective(c);
  header(out, "export-slice", c, cfg);
  if (c.field != "u" && c.field != "sdf" && c.field != "grad")
    throw ConfigError("--field must be u, sdf or grad");
  if (!c.z) throw ConfigError("--z is required");
  Common one = c;
  one.count = 1;
  RunConfig single = cfg;
  single.run.count = 1;
  const auto m = scenes_for(one, single, out).front();
  const auto grid = scene::scene_grid(m);
  const auto& spec = grid.spec;
  const double z = *c.z;
  if (!(z >= spec.origin.z() && z < spec.origin.z() + spec.extent().z()))
    throw ConfigError("--z " + std::to_string(z) + " lies outside the room height [0, " +
                      std::to_string(spec.extent().z()) + ")");
  const int k = spec.cell_of(Eigen::Vector3d(spec.origin.x(), spec.origin.y(), z))[2];
  const auto f = field::build_field(grid, m.goal, cfg.field);

  std::ostringstream csv;
  csv.precision(10);
  csv << (c.field == "grad" ? "i,j,x,y,z,fx,fy,fz\n" : "i,j,x,y,z,value\n");
  for (int j = 0; j < spec.dims[1]; ++j)
    for (int i = 0; i < spec.dims[0]; ++i) {
      const Eigen::Vector3d p = spec.cell_center(i, j, k);
      csv << i << ',' << j << ',' << p.x() << ',' << p.y() << ',' << p.z() << ',';
      if (c.field == "grad") {
        const auto& v = f.guidance.at(i, j, k);
        csv << v.x() << ',' << v.y() << ',' << v.z() << '\n';
      } else {
        const double v = c.field == "u" ? f.potential.at(i, j, k) : f.sdf.at(i, j, k);
        csv << v << '\n';
      }
    }
  if (c.out.empty()) {
    out << csv.str();
  } else {
    write_text(c.out, csv.str());
    out << "wrote " << c.out << '\n';
  }
  return kExitOk;
}

int serve(const Common& c, std::ostream& out) {
  const RunConfig cfg = effective(c);
  header(out, "serve", c, cfg);
  teleop::Server server(cfg);
  out << "listening on " << cfg.teleop.host << ':' << cfg.teleop.port << std::endl;
  server.run(cfg.teleop.host, cfg.teleop.port);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"fieldnav: humanoid potential fields on voxel scenes", "fieldnav"};
  app.require_subcommand(1);
  Common c;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", c.config_path, "JSON config file (flags override it)");
    sub->add_option("--seed", c.seed, "first scene seed");
    sub->add_option("--difficulty", c.difficulty, "difficulty in [0, 1]");
  };
  auto* gen = app.add_subcommand("gen-scene", "generate certified scenes");
  common(gen);
  gen->add_option("--count", c.count, "number of scenes (consecutive seeds)");
  gen->add_option("--out", c.out, "output directory");

  auto* roll = app.add_subcommand("rollout", "roll out the follower and summarize SR/DE");
  common(roll);
  roll->add_option("--scene", c.scene_path, "scene manifest (default: generate)");
  roll->add_option("--count", c.count, "generated scenes");
  roll->add_option("--trials", c.trials, "trials per scene");
  roll->add_flag("--reverse-field", c.reverse_field, "follow +grad U (diagnostic)");
  roll->add_option("--out", c.out, "directory for trace.jsonl and summaries");

  auto* slice = app.add_subcommand("export-slice", "write a z-slice of U, d or F as CSV");
  common(slice);
  slice->add_option("--scene", c.scene_path, "scene manifest (default: generate)");
  slice->add_option("--field", c.field, "u | sdf | grad");
  slice->add_option("--z", c.z, "slice height [m]");
  slice->add_option("--out", c.out, "CSV file (default: stdout)");

  auto* srv = app.add_subcommand("serve", "run the Click-and-Traverse server");
  srv->add_option("--config", c.config_path, "JSON config file (flags override it)");
  srv->add_option("--host", c.host, "bind address");
  srv->add_option("--port", c.port, "TCP port");

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  if (!args.empty()) args.pop_back();  // program name
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "fieldnav: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (gen->parsed()) return gen_scene(c, out);
    if (roll->parsed()) return rollout(c, out);
    if (slice->parsed()) return export_slice(c, out);
    return serve(c, out);
  } catch (const ConfigError& e) {
    err << "fieldnav: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ValidationError& e) {
    err << "fieldnav: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SceneRejectedError& e) {
    err << "fieldnav: scene rejected: " << e.what() << '\n';
    return kExitRejected;
  } catch (const InvalidGoalError& e) {
    err << "fieldnav: invalid goal: " << e.what() << '\n';
    return kExitRejected;
  } catch (const DomainError& e) {
    err << "fieldnav: " << e.what() << '\n';
    return kExitRejected;
  } catch (const Error& e) {
    err << "fieldnav: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace fieldnav::cli
