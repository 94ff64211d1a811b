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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// fails. `acceptance 3 7` runs only the listed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fieldnav/config.hpp"
#include "fieldnav/field/humanoid_field.hpp"
#include "fieldnav/scene/scene.hpp"
#include "fieldnav/sim/rollout.hpp"
#include "fieldnav/teleop/session.hpp"
#include "fieldnav/vmf/vmf.hpp"
#include "fieldnav/voxel/io.hpp"
#include "fieldnav/voxel/ops.hpp"
#include "oracles.hpp"

using namespace fieldnav;
using voxel::GridSpec;
using voxel::OccupancyGrid;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// 1. signed distance vs exhaustive nearest-cell scan, squared voxel units.
Verdict sdf_oracle() {
  std::mt19937_64 rng(101);
  const GridSpec spec(Eigen::Vector3d::Zero(), 1.0, {16, 16, 16});
  std::size_t mismatches = 0, checked = 0;
  for (int g = 0; g < 20; ++g) {
    const auto grid = oracle::random_grid(spec, 0.3, rng);
    const auto sdf = voxel::signed_distance(grid);
    const auto to_occ = oracle::brute_sqdist(grid, true);
    const auto to_free = oracle::brute_sqdist(grid, false);
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const double v = sdf.values[i];
      const bool occ = grid.occupied[i];
      const std::int64_t want = occ ? to_free[i] : to_occ[i];
      const std::int64_t got = std::llround(v * v);
      if ((occ ? v >= 0 : v <= 0) || got != want || std::abs(v * v - double(want)) > 1e-9)
        ++mismatches;
      ++checked;
    }
  }
  return {mismatches == 0, std::to_string(checked) + " voxels, " +
                               std::to_string(mismatches) + " mismatches"};
}

// A 24^3 scene from the box generator with start and goal certified
// reachable.
struct SmallScene {
  OccupancyGrid grid;
  voxel::Index3 goal;
};

SmallScene small_scene(std::uint64_t seed) {
  scene::SceneConfig cfg;
  cfg.room = Eigen::Vector3d(1.2, 1.2, 1.2);
  cfg.placement_margin = 0.1;
  cfg.n_max = 6;
  scene::SceneManifest m;
  m.room = cfg.room;
  m.resolution = 0.05;
  m.walls = false;
  m.morph_radius_vox = 1;
  m.perlin = {0.03, 0.4, 2};
  std::mt19937_64 rng(seed);
  for (std::uint64_t attempt = 0;; ++attempt) {
    m.seed = seed;
    m.boxes = scene::generate_boxes(seed, 0.5, cfg, attempt);
    const auto grid = scene::scene_grid(m);
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < grid.spec.size(); ++i)
      if (!grid.occupied[i]) free.push_back(i);
    if (free.size() < 2) continue;
    std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
    const auto s = grid.spec.coords(free[pick(rng)]);
    const auto g = grid.spec.coords(free[pick(rng)]);
    if (scene::certify_traversable(grid, grid.spec.cell_center(s), grid.spec.cell_center(g),
                                   0.05))
      return {grid, g};
  }
}

// 2. geodesic field vs reference Dijkstra.
Verdict geodesic_oracle() {
  double worst = 0.0;
  std::size_t reachable = 0, sentinel_mismatch = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto sc = small_scene(seed);
    const auto& spec = sc.grid.spec;
    if (spec.dims != voxel::Index3{24, 24, 24}) return {false, "scene is not 24^3"};
    const auto d = field::geodesic_field(sc.grid, spec.cell_center(sc.goal));
    const auto ref = oracle::reference_dijkstra(sc.grid, spec.index(sc.goal));
    for (std::size_t i = 0; i < ref.size(); ++i) {
      if (std::isinf(ref[i])) {
        if (d.values[i] != voxel::kSentinel) ++sentinel_mismatch;
      } else {
        ++reachable;
        worst = std::max(worst, std::abs(d.values[i] - ref[i]));
      }
    }
  }
  return {worst < 1e-9 && sentinel_mismatch == 0,
          fmt("max |err| %.3g m over %.0f reachable voxels, ", worst, double(reachable)) +
              std::to_string(sentinel_mismatch) + " sentinel mismatches"};
}

// 3. repulsive potential at (xi=1, d0=0.5).
Verdict repulsive_points() {
  const double want[3] = {2.0, 0.0, 0.0};
  const double ds[3] = {0.25, 0.5, 1.0};
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    worst = std::max(worst, std::abs(field::repulsive_value(ds[i], 1.0, 0.5, 0.05) - want[i]));
  return {worst <= 1e-12, fmt("max |err| %.3g", worst)};
}

// 4. sampled guidance vs central differences of sampled potential.
Verdict gradient_consistency() {
  const RunConfig cfg;
  std::mt19937_64 rng(404);
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = scene::generate_scene(seed, 0.3, cfg.scene);
    const auto f = field::build_field(s.grid, s.manifest.goal, cfg.field);
    const auto& spec = f.spec();
    const double h = spec.resolution;
    Eigen::Vector3d lo = spec.cell_center(1, 1, 1);
    Eigen::Vector3d hi = spec.cell_center(spec.dims[0] - 2, spec.dims[1] - 2, spec.dims[2] - 2);
    for (int n = 0; n < 100; ++n) {
      Eigen::Vector3d x;
      for (int a = 0; a < 3; ++a) x[a] = std::uniform_real_distribution<double>(lo[a], hi[a])(rng);
      Eigen::Vector3d fd;
      for (int a = 0; a < 3; ++a) {
        const Eigen::Vector3d e = h * Eigen::Vector3d::Unit(a);
        fd[a] = -(voxel::sample_trilinear(f.potential, x + e) -
                  voxel::sample_trilinear(f.potential, x - e)) / (2 * h);
      }
      const Eigen::Vector3d F = voxel::sample_trilinear(f.guidance, x);
      worst = std::max(worst, (F - fd).norm() / std::max(F.norm(), 1e-12));
    }
  }
  return {worst < 1e-6, fmt("max relative error %.3g over 500 points", worst)};
}

// 5. vMF density integrates to one; log normalizer at zero.
Verdict vmf_normalization() {
  std::mt19937_64 rng(55);
  double worst = 0.0;
  for (double kappa : {0.0, 0.1, 1.0, 10.0, 50.0}) {
    const vmf::VmfPrior prior{oracle::random_unit(rng), kappa};
    const double integral = oracle::sphere_integral(
        [&](const Eigen::Vector3d& v) { return std::exp(vmf::vmf_log_density(prior, v)); },
        1000, 1000, rng);
    worst = std::max(worst, std::abs(integral - 1.0));
  }
  const double c0 = vmf::log_c3(0.0);
  return {worst <= 1e-3 && std::abs(c0 + 2.53102) <= 1e-5,
          fmt("max |integral - 1| %.3g, log_c3(0) = %.7f", worst, c0)};
}

// 6. r_field is maximal at the prior directions.
Verdict rfield_argmax() {
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> kap(0.05, 50.0);
  std::normal_distribution<double> noise;
  int violations = 0, trials = 0;
  for (int set = 0; set < 50; ++set) {
    std::vector<vmf::VmfPrior> priors(13);
    std::vector<vmf::MotionSample> at_mu;
    for (auto& p : priors) {
      p.mu = oracle::random_unit(rng);
      p.kappa = kap(rng);
      at_mu.push_back({p.mu, true});
    }
    const double best = vmf::r_field(priors, at_mu);
    for (int n = 0; n < 200; ++n) {
      auto motion = at_mu;
      const double scale = std::exp(std::uniform_real_distribution<double>(-6, 1)(rng));
      for (auto& m : motion)
        m.v_hat = (m.v_hat + scale * Eigen::Vector3d(noise(rng), noise(rng), noise(rng))).normalized();
      ++trials;
      if (!(vmf::r_field(priors, motion) < best)) ++violations;
    }
  }
  return {violations == 0,
          std::to_string(violations) + " violations in " + std::to_string(trials)};
}

// 7. symmetric dilemma.
Verdict dilemma() {
  const RunConfig cfg;
  const auto m = sim::dilemma_scenario();
  const auto grid = scene::scene_grid(m);
  const auto f = field::build_field(grid, m.goal, cfg.field);
  const auto& spec = f.spec();
  const int j = spec.cell_of(Eigen::Vector3d(0, sim::kDilemmaAxis, 0))[1];
  if (std::abs(spec.cell_center(0, j, 0).y() - sim::kDilemmaAxis) > 1e-12)
    return {false, "symmetry plane misses the cell centers"};
  double lateral = 0.0;
  for (int k = 0; k < spec.dims[2]; ++k)
    for (int i = 0; i < spec.dims[0]; ++i)
      lateral = std::max(lateral, std::abs(f.guidance.at(i, j, k).y()));
  // Off-lattice points on the plane too.
  std::mt19937_64 rng(77);
  for (int n = 0; n < 1000; ++n) {
    const Eigen::Vector3d x(std::uniform_real_distribution<double>(0.1, 3.9)(rng),
                            sim::kDilemmaAxis,
                            std::uniform_real_distribution<double>(0.1, 1.9)(rng));
    lateral = std::max(lateral, std::abs(voxel::sample_trilinear(f.guidance, x).y()));
  }
  const bool a = lateral <= 1e-9;

  auto from = [&](double dy, bool constant_w1) {
    sim::RolloutConfig rc = cfg.rollout;
    rc.constant_w1 = constant_w1;
    const Eigen::Vector2d start(m.start.x(), m.start.y() + dy);
    return sim::rollout_on_field(f, cfg.agent, sim::initial_state(start, m.goal.head<2>()), rc);
  };
  const auto off = from(0.01, false);
  const auto off_neg = from(-0.01, false);
  const auto on_const = from(0.0, true);
  const bool b = off.success && off_neg.success;
  const bool c = !on_const.success && (on_const.termination == sim::Termination::kStalled ||
                                       on_const.termination == sim::Termination::kTimeout);
  std::ostringstream d;
  d << "(a) max |F_y| " << lateral << (a ? " ok" : " FAIL") << "; (b) offset +-0.01 m: "
    << sim::to_string(off.termination) << " in " << off.time_used << " s / "
    << sim::to_string(off_neg.termination) << (b ? " ok" : " FAIL")
    << "; (c) constant w1 on axis: " << sim::to_string(on_const.termination)
    << (c ? " ok" : " FAIL");
  return {a && b && c, d.str()};
}

// 8. follower competence on seeds 0-49 at difficulty 0.3.
Verdict competence() {
  const RunConfig cfg;
  std::vector<scene::SceneManifest> scenes;
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    scenes.push_back(scene::generate_scene(seed, 0.3, cfg.scene).manifest);
  const auto ev = sim::evaluate(scenes, cfg.agent, cfg.field, cfg.rollout, 1);
  std::string failed;
  for (const auto& t : ev.trials)
    if (!t.success) failed += " " + std::to_string(t.seed) + ":" + std::string(sim::to_string(t.termination));
  return {ev.sr >= 90.0 && ev.de_mean_success <= 0.1,
          fmt("SR %.1f%%, mean DE on successes %.4f m, mean DE %.4f m", ev.sr,
              ev.de_mean_success, ev.de_mean) +
              (failed.empty() ? "" : "; failed" + failed)};
}

// 9. clutter grows with difficulty; every scene certified.
Verdict difficulty_monotone() {
  const RunConfig cfg;
  std::vector<double> fills, boxes;
  int uncertified = 0;
  for (double d : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    double fill = 0.0, nbox = 0.0;
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
      const auto s = scene::generate_scene(seed, d, cfg.scene);
      fill += s.grid.fill_fraction();
      nbox += static_cast<double>(s.manifest.boxes.size());
      if (!scene::certify_traversable(s.grid, s.manifest.start, s.manifest.goal,
                                      cfg.scene.agent_radius))
        ++uncertified;
    }
    fills.push_back(fill / 64);
    boxes.push_back(nbox / 64);
  }
  bool mono = true;
  for (std::size_t i = 1; i < fills.size(); ++i)
    mono = mono && fills[i] >= fills[i - 1] && boxes[i] >= boxes[i - 1];
  std::ostringstream d;
  d << "fill";
  for (double v : fills) d << ' ' << v;
  d << "; boxes";
  for (double v : boxes) d << ' ' << v;
  d << "; " << uncertified << " uncertified";
  return {mono && uncertified == 0, d.str()};
}

// 10. morphology vs brute-force ball filters and structural properties.
Verdict morphology() {
  std::mt19937_64 rng(1010);
  int failures = 0, cases = 0;
  auto check = [&](bool ok) {
    ++cases;
    if (!ok) ++failures;
  };
  for (int n = 5; n <= 8; ++n) {
    const GridSpec spec(Eigen::Vector3d::Zero(), 1.0, {n, n, n});
    for (int r : {1, 2}) {
      for (double fill : {0.2, 0.35, 0.5, 0.8}) {
        const auto g = oracle::random_grid(spec, fill, rng);
        const auto dil = voxel::morph_dilate(g, r), ero = voxel::morph_erode(g, r);
        check(dil == oracle::brute_dilate(g, r));
        check(ero == oracle::brute_erode(g, r));
        const auto c = voxel::morph_close(g, r), o = voxel::morph_open(g, r);
        check(c == oracle::brute_erode(oracle::brute_dilate(g, r), r));
        check(o == oracle::brute_dilate(oracle::brute_erode(g, r), r));
        bool ext = true;
        for (std::size_t i = 0; i < g.occupied.size(); ++i) {
          if (g.occupied[i] && !c.occupied[i]) ext = false;
          if (o.occupied[i] && !g.occupied[i]) ext = false;
        }
        check(ext);
        check(voxel::morph_close(c, r) == c);
        check(voxel::morph_open(o, r) == o);
      }
    }
  }
  // Spike on a slab is removed, a one-voxel crack through it is sealed.
  OccupancyGrid slab(GridSpec(Eigen::Vector3d::Zero(), 1.0, {8, 8, 8}));
  for (int k = 2; k <= 5; ++k)
    for (int j = 0; j < 8; ++j)
      for (int i = 0; i < 8; ++i) slab.set(i, j, k, true);
  OccupancyGrid spiked = slab, cracked = slab;
  spiked.set(4, 4, 6, true);
  for (int k = 2; k <= 5; ++k) cracked.set(4, 4, k, false);
  check(scene::cleanup(spiked, 1) == slab);
  check(scene::cleanup(cracked, 1) == slab);
  check(scene::cleanup(spiked, 1) ==
        oracle::brute_dilate(oracle::brute_erode(oracle::brute_erode(oracle::brute_dilate(spiked, 1), 1), 1), 1));
  return {failures == 0, std::to_string(cases) + " checks, " + std::to_string(failures) + " failures"};
}

// 11. byte-identical scenes and traces; teleop log replay.
Verdict determinism() {
  const RunConfig cfg;
  bool scenes_same = true, traces_same = true;
  for (std::uint64_t seed : {0, 7, 42}) {
    const auto a = scene::generate_scene(seed, 0.3, cfg.scene);
    const auto b = scene::generate_scene(seed, 0.3, cfg.scene);
    scenes_same = scenes_same && scene::dump_manifest(a.manifest) == scene::dump_manifest(b.manifest) &&
                  voxel::encode(a.grid) == voxel::encode(b.grid);
    std::ostringstream ta, tb;
    sim::write_trace(sim::run_rollout(a.manifest, cfg.agent, cfg.field, cfg.rollout), ta);
    sim::write_trace(sim::run_rollout(b.manifest, cfg.agent, cfg.field, cfg.rollout), tb);
    traces_same = traces_same && ta.str() == tb.str() && !ta.str().empty();
  }

  // A clicked session with late rebuilds and a teleport, replayed from its
  // serialized log.
  scene::SceneManifest room;
  room.room = Eigen::Vector3d(4.0, 3.0, 2.0);
  room.perlin = {0.0, 0.4, 1};
  room.morph_radius_vox = 0;
  room.start = Eigen::Vector3d(1.0, 1.5, 0.6);
  room.goal = Eigen::Vector3d(3.0, 1.5, 0.6);
  OrientedBox block;
  block.center = Eigen::Vector3d(2.0, 2.3, 1.0);
  block.half_extents = Eigen::Vector3d(0.5, 0.5, 1.5);
  block.anchor = Anchor::kFloor;
  room.boxes.push_back(block);
  double worst = 0.0;
  std::size_t ticks = 0;
  for (auto mode : {teleop::RebuildMode::kSync, teleop::RebuildMode::kAsync}) {
    teleop::SessionOptions o;
    o.rebuild = mode;
    teleop::Session s("acceptance", room, cfg, o);
    const std::vector<std::pair<int, Eigen::Vector2d>> clicks = {
        {0, {3.2, 0.6}}, {12, {0.8, 2.4}}, {13, {0.9, 0.6}}, {40, {3.3, 2.5}}};
    std::size_t next = 0;
    for (int n = 0; n < 90; ++n) {
      while (next < clicks.size() && clicks[next].first == n) s.request_goal(clicks[next++].second);
      if (n == 60) s.request_teleport({1.0, 1.0});
      if (mode == teleop::RebuildMode::kAsync) std::this_thread::sleep_for(std::chrono::milliseconds(5));
      if (!s.tick()) return {false, "session froze"};
    }
    const auto again =
        teleop::replay(teleop::session_log_from_json(nlohmann::json::parse(to_json(s.log()).dump())));
    if (again.size() != s.history().size()) return {false, "replay length differs"};
    for (std::size_t n = 0; n < again.size(); ++n) {
      const auto &x = again[n], &y = s.history()[n];
      worst = std::max({worst, (x.root_xy - y.root_xy).cwiseAbs().maxCoeff(),
                        std::abs(x.heading - y.heading), std::abs(x.height_scale - y.height_scale),
                        std::abs(x.lean - y.lean), std::abs(x.lift - y.lift)});
    }
    ticks += again.size();
  }
  std::ostringstream d;
  d << "scenes " << (scenes_same ? "identical" : "DIFFER") << ", traces "
    << (traces_same ? "identical" : "DIFFER") << ", replay max deviation " << worst << " over "
    << ticks << " states";
  return {scenes_same && traces_same && worst <= 1e-9, d.str()};
}

struct Criterion {
  int id;
  const char* name;
  double budget;  // seconds, 0 if none
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "SDF oracle equivalence", 10, sdf_oracle},
      {2, "geodesic oracle equivalence", 30, geodesic_oracle},
      {3, "repulsive point values", 0, repulsive_points},
      {4, "gradient consistency", 0, gradient_consistency},
      {5, "vMF normalization", 0, vmf_normalization},
      {6, "R_field argmax", 0, rfield_argmax},
      {7, "symmetric dilemma", 30, dilemma},
      {8, "follower competence", 300, competence},
      {9, "difficulty monotonicity", 0, difficulty_monotone},
      {10, "morphology properties", 0, morphology},
      {11, "determinism and replay", 0, determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget > 0 && secs >= c.budget) {
      v.pass = false;
      v.detail += "; over the " + std::to_string(static_cast<int>(c.budget)) + " s budget";
    }
    if (!v.pass) ++failed;
    std::printf("criterion %2d %s: %s (%.2f s) %s\n", c.id, v.pass ? "PASS" : "FAIL", c.name, secs,
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
