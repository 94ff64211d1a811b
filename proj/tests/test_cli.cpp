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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fieldnav/cli.hpp"
#include "fieldnav/config.hpp"
#include "fieldnav/scene/scene.hpp"
#include "fieldnav/sim/rollout.hpp"
#include "fieldnav/voxel/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
namespace cli = fieldnav::cli;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "fieldnav");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fieldnav_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

json header_of(const std::string& out) {
  const std::string tag = "# effective-config ";
  REQUIRE(out.rfind(tag, 0) == 0);
  return json::parse(out.substr(tag.size(), out.find('\n') - tag.size()));
}

struct Csv {
  std::vector<std::string> cols;
  std::vector<std::vector<double>> rows;
};

Csv read_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Csv csv;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (csv.cols.empty()) {
      csv.cols = cells;
      continue;
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(std::stod(c));
    csv.rows.push_back(row);
  }
  return csv;
}

std::string write_manifest(const fs::path& dir, const fieldnav::scene::SceneManifest& m) {
  const fs::path p = dir / "scene.json";
  std::ofstream(p) << fieldnav::scene::dump_manifest(m);
  return p.string();
}

}  // namespace

TEST_CASE("gen-scene writes identical files for the same seed") {
  const auto a = scratch("gen_a"), b = scratch("gen_b");
  const auto ra = run({"gen-scene", "--seed", "7", "--difficulty", "0.3", "--out", a.string()});
  const auto rb = run({"gen-scene", "--seed", "7", "--difficulty", "0.3", "--out", b.string()});
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  for (const char* f : {"scene_7.json", "scene_7.vxf"}) {
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const json h = header_of(ra.out);
  CHECK(h["command"] == "gen-scene");
  CHECK(h["config"]["run"]["seed"] == 7);
  CHECK(h["config"]["run"]["difficulty"] == 0.3);

  // The grid file decodes to the grid the manifest rasterizes to.
  const auto m = fieldnav::scene::load_manifest((a / "scene_7.json").string());
  const auto any = fieldnav::voxel::decode(fieldnav::voxel::read_file(a / "scene_7.vxf"));
  REQUIRE(std::holds_alternative<fieldnav::voxel::OccupancyGrid>(any));
  const auto& g = std::get<fieldnav::voxel::OccupancyGrid>(any);
  CHECK(g.occupied == fieldnav::scene::scene_grid(m).occupied);
}

TEST_CASE("gen-scene --count 50 emits certified scenes for consecutive seeds") {
  const auto dir = scratch("gen50");
  const auto r = run({"gen-scene", "--seed", "7", "--count", "50", "--out", dir.string()});
  REQUIRE(r.code == 0);
  fieldnav::scene::SceneConfig sc;
  for (int seed = 7; seed <= 56; ++seed) {
    const fs::path p = dir / ("scene_" + std::to_string(seed) + ".json");
    REQUIRE(fs::exists(p));
    const auto m = fieldnav::scene::load_manifest(p.string());
    CHECK(m.seed == static_cast<std::uint64_t>(seed));
    const auto grid = fieldnav::scene::scene_grid(m);
    CHECK(fieldnav::scene::certify_traversable(grid, m.start, m.goal, sc.agent_radius));
    CHECK(fieldnav::scene::certify_walkable(grid, m.start, m.goal, sc.walkable_radius,
                                            sc.body_band));
  }
  CHECK_FALSE(fs::exists(dir / "scene_57.json"));
}

TEST_CASE("exit codes follow the usage / rejection contract") {
  auto r = run({"gen-scene", "--difficulty", "1.5"});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("difficulty") != std::string::npos);

  CHECK(run({}).code == cli::kExitConfig);
  CHECK(run({"frobnicate"}).code == cli::kExitConfig);
  CHECK(run({"rollout", "--bogus"}).code == cli::kExitConfig);
  CHECK(run({"rollout", "--trials", "many"}).code == cli::kExitConfig);
  r = run({"--help"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("export-slice") != std::string::npos);

  const auto dir = scratch("codes");
  std::ofstream(dir / "reject.json") << R"({"scene": {"start_clearance": 2.3, "max_attempts": 2}})";
  r = run({"gen-scene", "--config", (dir / "reject.json").string(), "--out", dir.string()});
  CHECK(r.code == cli::kExitRejected);

  std::ofstream(dir / "unknown.json") << R"({"scene": {"no_such_key": 1}})";
  r = run({"gen-scene", "--config", (dir / "unknown.json").string()});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("scene.no_such_key") != std::string::npos);

  r = run({"gen-scene", "--config", (dir / "absent.json").string()});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("absent.json") != std::string::npos);
}

TEST_CASE("rollout summarizes trials and writes trace and summaries") {
  const auto dir = scratch("rollout");
  REQUIRE(run({"gen-scene", "--seed", "3", "--out", dir.string()}).code == 0);
  const std::string scene = (dir / "scene_3.json").string();
  const auto r = run({"rollout", "--scene", scene, "--trials", "4", "--out", (dir / "out").string()});
  REQUIRE(r.code == 0);
  const json summary = json::parse(slurp(dir / "out" / "summary.json"));
  const double sr = summary["sr"].get<double>();
  bool quantized = false;
  for (double q : {0.0, 25.0, 50.0, 75.0, 100.0}) quantized = quantized || sr == q;
  CHECK(quantized);
  CHECK(summary["trials"].size() == 4);
  CHECK(fs::file_size(dir / "out" / "trace.jsonl") > 0);
  CHECK(slurp(dir / "out" / "summary.csv").rfind("scene,seed,trial", 0) == 0);

  // Every trace line is a JSON object.
  std::istringstream trace(slurp(dir / "out" / "trace.jsonl"));
  std::string line;
  int lines = 0;
  while (std::getline(trace, line)) {
    CHECK(json::parse(line).is_object());
    ++lines;
  }
  CHECK(lines > 1);
}

TEST_CASE("rollout with a missing scene names the path") {
  const auto r = run({"rollout", "--scene", "/definitely/not/here.json"});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("/definitely/not/here.json") != std::string::npos);
}

TEST_CASE("rollout --reverse-field drives the diagnostic follower") {
  const auto dir = scratch("reverse");
  REQUIRE(run({"gen-scene", "--seed", "5", "--difficulty", "0", "--out", dir.string()}).code == 0);
  const std::string scene = (dir / "scene_5.json").string();
  const auto fwd = run({"rollout", "--scene", scene, "--out", (dir / "f").string()});
  const auto rev = run({"rollout", "--scene", scene, "--reverse-field", "--out", (dir / "r").string()});
  REQUIRE(fwd.code == 0);
  REQUIRE(rev.code == 0);
  CHECK(header_of(rev.out)["config"]["rollout"]["reverse_field"] == true);
  CHECK(header_of(fwd.out)["config"]["rollout"]["reverse_field"] == false);

  // Same outcome as the library with reverse_field set.
  const auto m = fieldnav::scene::load_manifest(scene);
  fieldnav::sim::RolloutConfig rc;
  rc.reverse_field = true;
  const auto lib = fieldnav::sim::run_rollout(m, {}, {}, rc);
  const json s = json::parse(slurp(dir / "r" / "summary.json"));
  CHECK(s["trials"][0]["success"] == lib.success);
  CHECK(s["trials"][0]["de"].get<double>() == lib.de);
  CHECK(json::parse(slurp(dir / "f" / "summary.json"))["sr"] == 100.0);
  CHECK_FALSE(lib.success);
}

TEST_CASE("flags override the config file and the header reproduces the run") {
  const auto dir = scratch("override");
  std::ofstream(dir / "cfg.json") << R"({"run": {"seed": 3, "difficulty": 0.5},
                                         "field": {"d0": 0.4}})";
  const auto r = run({"gen-scene", "--config", (dir / "cfg.json").string(), "--seed", "4",
                      "--out", (dir / "a").string()});
  REQUIRE(r.code == 0);
  const json h = header_of(r.out);
  CHECK(h["config"]["run"]["seed"] == 4);
  CHECK(h["config"]["run"]["difficulty"] == 0.5);
  CHECK(h["config"]["field"]["d0"] == 0.4);

  // Feeding the echoed config back in regenerates the same bytes.
  std::ofstream(dir / "echo.json") << h["config"].dump();
  const auto again = run({"gen-scene", "--config", (dir / "echo.json").string(), "--out",
                          (dir / "b").string()});
  REQUIRE(again.code == 0);
  CHECK(header_of(again.out)["config"] == h["config"]);
  CHECK(slurp(dir / "a" / "scene_4.json") == slurp(dir / "b" / "scene_4.json"));
  CHECK(slurp(dir / "a" / "scene_4.vxf") == slurp(dir / "b" / "scene_4.vxf"));
}

TEST_CASE("export-slice of an empty room is monotone away from the goal") {
  using fieldnav::scene::SceneManifest;
  const auto dir = scratch("slice_empty");
  SceneManifest m;
  m.room = Eigen::Vector3d(3.0, 2.0, 1.0);
  m.resolution = 0.1;
  m.walls = true;
  m.morph_radius_vox = 0;
  m.start = Eigen::Vector3d(0.55, 1.05, 0.55);
  m.goal = Eigen::Vector3d(2.05, 1.05, 0.55);
  const std::string scene = write_manifest(dir, m);

  const auto r = run({"export-slice", "--scene", scene, "--field", "u", "--z", "0.55"});
  REQUIRE(r.code == 0);
  const Csv csv = read_csv(r.out.substr(r.out.find('\n') + 1));
  REQUIRE(csv.cols == std::vector<std::string>{"i", "j", "x", "y", "z", "value"});
  REQUIRE(csv.rows.size() == 30u * 20u);

  // Row through the goal (j = 10), interior cells 1..28; the goal column is i = 20.
  std::vector<double> row(30);
  for (const auto& c : csv.rows)
    if (c[1] == 10) row[static_cast<int>(c[0])] = c[5];
  for (int i = 20; i + 1 <= 28; ++i) CHECK(row[i + 1] > row[i]);
  for (int i = 20; i - 1 >= 1; --i) CHECK(row[i - 1] > row[i]);
  for (const auto& c : csv.rows) CHECK(std::abs(c[4] - 0.55) < 1e-12);
}

TEST_CASE("export-slice of the guidance field vanishes laterally on the dilemma axis") {
  const auto dir = scratch("slice_dilemma");
  const std::string scene = write_manifest(dir, fieldnav::sim::dilemma_scenario());
  const fs::path out = dir / "grad.csv";
  const auto r = run({"export-slice", "--scene", scene, "--field", "grad", "--z", "0.6",
                      "--out", out.string()});
  REQUIRE(r.code == 0);
  const Csv csv = read_csv(slurp(out));
  REQUIRE(csv.cols == std::vector<std::string>{"i", "j", "x", "y", "z", "fx", "fy", "fz"});
  int on_axis = 0;
  for (const auto& c : csv.rows) {
    if (std::abs(c[3] - fieldnav::sim::kDilemmaAxis) > 1e-9) continue;
    ++on_axis;
    CHECK(std::abs(c[6]) <= 1e-9);
  }
  CHECK(on_axis > 10);
}

TEST_CASE("export-slice rejects heights outside the room and unknown fields") {
  const auto dir = scratch("slice_bad");
  const std::string scene = write_manifest(dir, fieldnav::sim::dilemma_scenario());
  CHECK(run({"export-slice", "--scene", scene, "--z", "-0.1"}).code == cli::kExitConfig);
  CHECK(run({"export-slice", "--scene", scene, "--z", "2.0"}).code == cli::kExitConfig);
  CHECK(run({"export-slice", "--scene", scene, "--z", "0.5", "--field", "w"}).code ==
        cli::kExitConfig);
  CHECK(run({"export-slice", "--scene", scene}).code == cli::kExitConfig);
}
