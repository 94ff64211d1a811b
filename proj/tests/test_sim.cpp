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
#include <numbers>
#include <random>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "fieldnav/errors.hpp"
#include "fieldnav/scene/scene.hpp"
#include "fieldnav/sim/agent.hpp"
#include "fieldnav/sim/rollout.hpp"
#include "fieldnav/voxel/ops.hpp"

using namespace fieldnav;
using Catch::Approx;

namespace {

scene::SceneManifest room(double lx, double ly, const Eigen::Vector3d& start,
                          const Eigen::Vector3d& goal) {
  scene::SceneManifest m;
  m.room = Eigen::Vector3d(lx, ly, 2.0);
  m.resolution = 0.05;
  m.walls = true;
  m.perlin = {0.0, 0.4, 1};
  m.morph_radius_vox = 0;
  m.start = start;
  m.goal = goal;
  return m;
}

OrientedBox floor_box(const Eigen::Vector3d& c, const Eigen::Vector3d& h) {
  OrientedBox b;
  b.center = c;
  b.half_extents = h;
  b.anchor = Anchor::kFloor;
  return b;
}

struct Built {
  voxel::OccupancyGrid grid;
  field::HumanoidField field;
};

Built build(const scene::SceneManifest& m) {
  Built b;
  b.grid = scene::scene_grid(m);
  b.field = field::build_field(b.grid, m.goal, field::FieldParams{});
  return b;
}

sim::RolloutResult roll(const Built& b, const scene::SceneManifest& m,
                        const sim::RolloutConfig& cfg = {}) {
  return sim::rollout_on_field(b.field, sim::AgentModel{},
                               sim::initial_state(m.start.head<2>(), m.goal.head<2>()), cfg);
}

double closest_approach(const sim::RolloutResult& r, const Eigen::Vector3d& goal) {
  double best = INFINITY;
  for (const auto& s : r.trajectory) best = std::min(best, (s.state.root_xy - goal.head<2>()).norm());
  return best;
}

double mean_reward(const sim::RolloutResult& r) {
  double s = 0.0;
  for (std::size_t n = 1; n < r.trajectory.size(); ++n) s += r.trajectory[n].r_field;
  return s / static_cast<double>(r.trajectory.size() - 1);
}

}  // namespace

TEST_CASE("default model: 13 parts, top probe at 1.3 m, positive radii") {
  const sim::AgentModel model;
  REQUIRE(model.size() == 13);
  double top = 0.0;
  for (const auto& p : model.parts) {
    CHECK(p.radius > 0.0);
    top = std::max(top, p.offset.z());
    if (p.mirror >= 0) {
      const auto& q = model.parts[p.mirror];
      CHECK(q.mirror == &p - model.parts.data());
      CHECK(q.offset.x() == p.offset.x());
      CHECK(q.offset.y() == -p.offset.y());
      CHECK(q.offset.z() == p.offset.z());
    }
  }
  CHECK(top == Approx(1.3).margin(1e-12));
  CHECK_NOTHROW(model.validate());
}

TEST_CASE("derive_parts maps the root frame") {
  const sim::AgentModel model;
  auto st = sim::initial_state({1.0, 2.0}, {2.0, 2.0});
  CHECK(st.heading == 0.0);

  SECTION("identity configuration") {
    const auto parts = sim::derive_parts(model, st);
    for (int k = 0; k < model.size(); ++k) {
      const Eigen::Vector3d want = Eigen::Vector3d(1.0, 2.0, 0.0) + model.parts[k].offset;
      CHECK((parts[k].position - want).norm() < 1e-12);
      CHECK(parts[k].velocity.norm() == 0.0);
      CHECK(parts[k].id == k);
      CHECK(parts[k].is_root == (k == model.root_index));
    }
  }
  SECTION("crouch scales every vertical offset") {
    st.height_scale = 0.7;
    const auto parts = sim::derive_parts(model, st);
    double top = 0.0;
    for (int k = 0; k < model.size(); ++k) {
      CHECK(parts[k].position.z() == Approx(0.7 * model.parts[k].offset.z()).margin(1e-12));
      top = std::max(top, parts[k].position.z());
    }
    CHECK(top == Approx(0.91).margin(1e-12));
  }
  SECTION("heading rotates offsets and lean shifts along the left axis") {
    st.heading = std::numbers::pi / 2;
    st.lean = 0.1;
    const auto parts = sim::derive_parts(model, st);
    // Left of a +y heading is -x; the head carries the full lean.
    const int head = 2;
    const auto& o = model.parts[head].offset;
    CHECK(parts[head].position.x() == Approx(1.0 - o.y() - 0.1).margin(1e-12));
    CHECK(parts[head].position.y() == Approx(2.0 + o.x()).margin(1e-12));
  }
  SECTION("velocities are the derivative of the map") {
    st.root_velocity = {0.3, -0.2};
    st.crouch_rate = -0.4;
    st.lean_rate = 0.2;
    st.lift_rate = 0.5;
    st.height_scale = 0.8;
    st.lean = 0.05;
    st.lift = 0.1;
    const double h = 1e-6;
    auto moved = st;
    moved.root_xy += h * st.root_velocity;
    moved.height_scale += h * st.crouch_rate;
    moved.lean += h * st.lean_rate;
    moved.lift += h * st.lift_rate;
    const auto a = sim::derive_parts(model, st);
    const auto b = sim::derive_parts(model, moved);
    for (int k = 0; k < model.size(); ++k) {
      const Eigen::Vector3d fd = (b[k].position - a[k].position) / h;
      CHECK((fd - a[k].velocity).norm() < 1e-6);
    }
  }
}

TEST_CASE("collision check uses a strict inequality") {
  // Part on a cell center so the sample is the stored value exactly.
  voxel::GridSpec spec({0, 0, 0}, 0.125, {4, 4, 4});
  field::BodyPartState p;
  p.position = Eigen::Vector3d(0.3125, 0.3125, 0.3125);
  p.radius = 0.1;
  SECTION("d above radius") {
    CHECK_FALSE(sim::check_collision(voxel::ScalarField(spec, 0.2), {p}));
  }
  SECTION("d equal to radius") {
    CHECK_FALSE(sim::check_collision(voxel::ScalarField(spec, 0.1), {p}));
    CHECK(sim::min_clearance(voxel::ScalarField(spec, 0.1), {p}) == 0.0);
  }
  SECTION("d below radius or inside") {
    CHECK(sim::check_collision(voxel::ScalarField(spec, 0.0999), {p}));
    CHECK(sim::check_collision(voxel::ScalarField(spec, -0.05), {p}));
  }
}

TEST_CASE("step_follower validates dt and bounds") {
  const auto m = room(4.0, 3.0, {1.0, 1.5, 0.6}, {3.0, 1.5, 0.6});
  const auto b = build(m);
  const sim::AgentModel model;
  const auto st = sim::initial_state({1.0, 1.5}, {3.0, 1.5});
  CHECK_THROWS_AS(sim::step_follower(b.field, model, st, 0.0), ValidationError);
  CHECK_THROWS_AS(sim::step_follower(b.field, model, st, 0.11), ValidationError);
  CHECK_NOTHROW(sim::step_follower(b.field, model, st, 0.1));
  auto outside = st;
  outside.root_xy = {-1.0, 1.5};
  CHECK_THROWS_AS(sim::step_follower(b.field, model, outside, 0.02), DomainError);
}

TEST_CASE("zero field leaves the state unchanged") {
  const auto m = room(4.0, 3.0, {1.0, 1.5, 0.6}, {3.0, 1.5, 0.6});
  auto b = build(m);
  for (auto& v : b.field.guidance.vectors) v.setZero();
  for (auto& v : b.field.potential.values) v = 0.0;
  const sim::AgentModel model;
  const auto st = sim::initial_state({3.0, 1.5}, {3.0, 1.5});
  const auto next = sim::step_follower(b.field, model, st, 0.02);
  CHECK(next.root_xy == st.root_xy);
  CHECK(next.height_scale == st.height_scale);
  CHECK(next.lean == st.lean);
  CHECK(next.lift == st.lift);
  CHECK(next.root_velocity.norm() == 0.0);
}

TEST_CASE("free corridor: straight at full speed") {
  // 33 cells across: start and goal sit on the center row of cells.
  const auto m = room(5.0, 1.65, {0.825, 0.825, 0.6}, {4.225, 0.825, 0.6});
  const auto b = build(m);
  sim::RolloutConfig cfg;
  const auto r = roll(b, m, cfg);
  CHECK(r.success);
  const double tol = 2.0 * std::numbers::pi / 180.0;
  for (std::size_t n = 1; n < r.trajectory.size(); ++n) {
    const auto& v = r.trajectory[n].state.root_velocity;
    REQUIRE(v.norm() > 0.0);
    CHECK(std::abs(std::atan2(v.y(), v.x())) < tol);
    CHECK(v.norm() == Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("empty room: goal 2 m ahead reached in about 2 s") {
  const auto m = room(4.0, 3.0, {1.0, 1.5, 0.6}, {3.0, 1.5, 0.6});
  const auto b = build(m);
  const auto r = roll(b, m);
  CHECK(r.success);
  CHECK_FALSE(r.collided);
  CHECK(r.termination == sim::Termination::kReached);
  // Full speed from the first step; the 0.1 m success radius ends it early.
  CHECK(r.time_used == Approx(1.9).margin(0.021));
  CHECK(r.de <= 0.1);
}

TEST_CASE("run_rollout builds the field from the manifest") {
  const auto m = room(4.0, 3.0, {1.0, 1.5, 0.6}, {3.0, 1.5, 0.6});
  const auto r = sim::run_rollout(m, sim::AgentModel{}, field::FieldParams{}, sim::RolloutConfig{});
  const auto b = build(m);
  const auto direct = roll(b, m);
  CHECK(r.success);
  CHECK(r.time_used == direct.time_used);
  CHECK(r.de == direct.de);
}

TEST_CASE("bisected room: goal unreachable") {
  auto m = room(4.0, 3.0, {1.0, 1.5, 0.6}, {3.0, 1.5, 0.6});
  m.boxes.push_back(floor_box({2.0, 1.5, 1.0}, {0.1, 1.6, 1.5}));
  REQUIRE_FALSE(scene::certify_traversable(scene::scene_grid(m), m.start, m.goal, 0.25));
  const auto b = build(m);
  const auto r = roll(b, m);
  CHECK_FALSE(r.success);
  CHECK((r.termination == sim::Termination::kTimeout ||
         r.termination == sim::Termination::kStalled));
  SECTION("de is the closest 2D approach over the trajectory") {
    CHECK(r.de == closest_approach(r, m.goal));
    CHECK(r.de > 0.1);
  }
}

TEST_CASE("low overhead beam: crouch under it, recover after") {
  // Beam underside at 1.05 m, above the shoulders' reach when crouched.
  auto m = room(5.0, 2.0, {0.8, 1.0, 0.6}, {4.2, 1.0, 0.6});
  OrientedBox beam;
  beam.center = Eigen::Vector3d(2.5, 1.0, 1.5);
  beam.half_extents = Eigen::Vector3d(0.15, 1.2, 0.45);
  beam.anchor = Anchor::kCeiling;
  m.boxes.push_back(beam);
  const auto b = build(m);
  const auto r = roll(b, m);
  REQUIRE(r.success);

  const double x0 = 2.5 - 0.15, x1 = 2.5 + 0.15;
  double hs_under = 1.0;
  double hs_enter = 1.0;
  bool entered = false;
  double t_exit = -1.0;
  for (const auto& s : r.trajectory) {
    const double x = s.state.root_xy.x();
    if (!entered && x >= x0) {
      entered = true;
      hs_enter = s.state.height_scale;
    }
    if (x >= x0 && x <= x1) hs_under = std::min(hs_under, s.state.height_scale);
    if (t_exit < 0.0 && x > x1) t_exit = s.t;
  }
  CHECK(hs_enter < 1.0);
  CHECK(hs_under < 0.85);
  CHECK(hs_under >= sim::AgentModel{}.min_height_scale() - 1e-12);

  SECTION("height recovers within 2 s of clearing the beam") {
    // Recovery counted from leaving the beam's influence range.
    const double clear_x = x1 + field::FieldParams{}.d0;
    double t_clear = -1.0;
    for (const auto& s : r.trajectory)
      if (t_clear < 0.0 && s.state.root_xy.x() > clear_x) t_clear = s.t;
    REQUIRE(t_clear > 0.0);
    // Continue past the goal in a longer room to watch the recovery.
    auto m2 = room(8.0, 2.0, {0.8, 1.0, 0.6}, {7.2, 1.0, 0.6});
    m2.boxes = m.boxes;
    const auto b2 = build(m2);
    const auto r2 = roll(b2, m2);
    REQUIRE(r2.success);
    double t2_clear = -1.0;
    for (const auto& s : r2.trajectory) {
      if (t2_clear < 0.0 && s.state.root_xy.x() > clear_x) t2_clear = s.t;
      if (t2_clear >= 0.0 && s.t >= t2_clear + 2.0) {
        CHECK(s.state.height_scale >= 0.99);
        break;
      }
    }
    REQUIRE(t2_clear > 0.0);
  }
}

TEST_CASE("evaluate arithmetic") {
  auto rec = [](bool ok, double de) {
    sim::TrialRecord t;
    t.success = ok;
    t.de = de;
    return t;
  };
  SECTION("all succeed") {
    const auto ev = sim::summarize({rec(true, 0.0), rec(true, 0.05)});
    CHECK(ev.sr == 100.0);
  }
  SECTION("3 of 4") {
    const auto ev = sim::summarize({rec(true, 0), rec(true, 0), rec(false, 1), rec(true, 0)});
    CHECK(ev.sr == 75.0);
  }
  SECTION("de mean") {
    const auto ev = sim::summarize({rec(true, 0.0), rec(false, 0.2)});
    CHECK(ev.de_mean == Approx(0.1).margin(1e-15));
    CHECK(ev.de_mean_success == 0.0);
  }
  CHECK_THROWS_AS(sim::summarize({}), ValidationError);
}

TEST_CASE("evaluate: trials, thread count and determinism") {
  const auto m = room(4.0, 3.0, {1.0, 1.5, 0.6}, {3.0, 1.5, 0.6});
  auto m2 = m;
  m2.seed = 9;
  m2.start = Eigen::Vector3d(1.2, 1.0, 0.6);
  const std::vector<scene::SceneManifest> scenes{m, m2, sim::dilemma_scenario()};
  const auto ev1 = sim::evaluate(scenes, {}, {}, {}, 4, 1);
  const auto ev3 = sim::evaluate(scenes, {}, {}, {}, 4, 3);
  REQUIRE(ev1.trials.size() == 12);
  CHECK(std::fmod(ev1.sr * 12.0 / 100.0, 1.0) == Approx(0.0).margin(1e-9));
  CHECK(ev1.to_json().dump() == ev3.to_json().dump());
  CHECK(ev1.to_csv() == ev3.to_csv());
  CHECK(ev1.trials[0].de != ev1.trials[1].de);  // jittered starts
  for (int t = 0; t < 4; ++t) CHECK(ev1.trials[t].success);
  CHECK_THROWS_AS(sim::evaluate(std::span<const scene::SceneManifest>{}, {}, {}, {}, 1, 1),
                  ValidationError);
}

TEST_CASE("trial starts stay within the jitter radius") {
  const auto m = sim::dilemma_scenario();
  sim::RolloutConfig cfg;
  CHECK(sim::trial_start(m, 0, cfg) == m.start.head<2>());
  for (int t = 1; t < 50; ++t) {
    const auto s = sim::trial_start(m, t, cfg);
    CHECK((s - m.start.head<2>()).norm() <= cfg.trial_jitter);
    CHECK(s == sim::trial_start(m, t, cfg));
  }
}

TEST_CASE("time limit scales with distance") {
  sim::RolloutConfig cfg;
  CHECK(cfg.limit_for(2.0, 1.0) == 5.0);
  CHECK(cfg.limit_for(4.0, 1.0) == 10.0);
  CHECK(cfg.limit_for(4.0, 2.0) == 5.0);
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("rollouts and traces are byte-identical across runs") {
  const auto m = sim::dilemma_scenario();
  auto run = [&] {
    sim::RolloutConfig cfg;
    const auto b = build(m);
    const auto st = sim::initial_state(m.start.head<2>() + Eigen::Vector2d(0, 0.01),
                                       m.goal.head<2>());
    const auto r = sim::rollout_on_field(b.field, sim::AgentModel{}, st, cfg);
    std::ostringstream out;
    sim::write_trace(r, out);
    return out.str() + sim::summary_json(r).dump();
  };
  const auto a = run();
  CHECK(a == run());
  CHECK(!a.empty());
}

TEST_CASE("trace records carry the documented keys") {
  const auto m = room(4.0, 3.0, {1.0, 1.5, 0.6}, {3.0, 1.5, 0.6});
  const auto b = build(m);
  const auto r = roll(b, m);
  std::ostringstream out;
  sim::write_trace(r, out);
  std::istringstream in(out.str());
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    for (const char* key : {"t", "root_xy", "height_scale", "lean", "parts", "r_field"})
      CHECK(j.contains(key));
    REQUIRE(j["parts"].size() == 13);
    for (const auto& p : j["parts"]) {
      CHECK(p["pos"].size() == 3);
      CHECK(p["f_h"].size() == 3);
      CHECK(p.contains("kappa"));
    }
    ++lines;
  }
  CHECK(lines == r.trajectory.size());
  const auto s = sim::summary_json(r);
  CHECK(s["success"] == true);
  CHECK(s["termination"] == "reached");
}

TEST_CASE("successful rollouts keep every part clear") {
  scene::SceneConfig sc;
  int successes = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto gen = scene::generate_scene(seed, 0.3, sc);
    const auto f = field::build_field(gen.grid, gen.manifest.goal, field::FieldParams{});
    const auto r = sim::rollout_on_field(
        f, sim::AgentModel{},
        sim::initial_state(gen.manifest.start.head<2>(), gen.manifest.goal.head<2>()), {});
    if (!r.success) continue;
    ++successes;
    double worst = INFINITY;
    const sim::AgentModel model;
    for (const auto& s : r.trajectory) {
      for (const auto& p : sim::derive_parts(model, s.state)) {
        worst = std::min(worst, voxel::sample_trilinear(f.sdf, p.position) - p.radius);
      }
    }
    CHECK(worst >= 0.0);
    CHECK(worst == r.min_clearance);
  }
  CHECK(successes >= 8);
}

TEST_CASE("field-aligned motion earns more reward than reversed motion") {
  scene::SceneConfig sc;
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto gen = scene::generate_scene(seed, 0.0, sc);
    const auto f = field::build_field(gen.grid, gen.manifest.goal, field::FieldParams{});
    const auto st =
        sim::initial_state(gen.manifest.start.head<2>(), gen.manifest.goal.head<2>());
    sim::RolloutConfig cfg;
    const auto fwd = sim::rollout_on_field(f, sim::AgentModel{}, st, cfg);
    cfg.reverse_field = true;
    const auto rev = sim::rollout_on_field(f, sim::AgentModel{}, st, cfg);
    if (!fwd.success) continue;
    ++compared;
    REQUIRE(rev.trajectory.size() > 1);
    CHECK(mean_reward(fwd) > mean_reward(rev));
  }
  CHECK(compared >= 18);
}

TEST_CASE("dilemma scene is mirror symmetric") {
  const auto m = sim::dilemma_scenario();
  const auto grid = scene::scene_grid(m);
  const auto& s = grid.spec;
  REQUIRE(s.dims[1] % 2 == 1);
  const int axis = s.dims[1] / 2;
  CHECK(s.cell_center(0, axis, 0).y() == Approx(sim::kDilemmaAxis).margin(1e-12));
  std::size_t mismatches = 0;
  for (int k = 0; k < s.dims[2]; ++k)
    for (int j = 0; j < s.dims[1]; ++j)
      for (int i = 0; i < s.dims[0]; ++i)
        mismatches += grid.at(i, j, k) != grid.at(i, s.dims[1] - 1 - j, k);
  CHECK(mismatches == 0);
  CHECK(scene::certify_traversable(grid, m.start, m.goal, 0.25));

  const auto f = field::build_field(grid, m.goal, field::FieldParams{});
  SECTION("lateral field is zero on the symmetry plane") {
    double worst = 0.0;
    for (int k = 1; k < s.dims[2] - 1; ++k)
      for (int i = 1; i < s.dims[0] - 1; ++i) {
        if (grid.at(i, axis, k)) continue;
        worst = std::max(worst, std::abs(f.guidance.at(i, axis, k).y()));
      }
    CHECK(worst <= 1e-9);
  }
  SECTION("equal-weight queries at mirrored points cancel laterally") {
    field::QueryOptions eq;
    eq.constant_w1 = true;
    eq.w1_value = 1.0;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(0.5, 3.5), uy(0.02, 1.5), uz(0.1, 1.5);
    for (int n = 0; n < 200; ++n) {
      const double x = ux(rng), dy = uy(rng), z = uz(rng);
      field::BodyPartState a, b;
      a.position = Eigen::Vector3d(x, sim::kDilemmaAxis + dy, z);
      b.position = Eigen::Vector3d(x, sim::kDilemmaAxis - dy, z);
      a.is_root = b.is_root = true;
      const auto qa = field::query_humanoid_pf(f, a, eq);
      const auto qb = field::query_humanoid_pf(f, b, eq);
      CHECK(std::abs(qa.f_h.y() + qb.f_h.y()) <= 1e-9);
    }
  }
}

TEST_CASE("dilemma: on-axis start is trapped, off-axis start escapes") {
  const auto m = sim::dilemma_scenario();
  const auto b = build(m);
  auto run = [&](double offset, bool constant_w1) {
    sim::RolloutConfig cfg;
    cfg.constant_w1 = constant_w1;
    const auto st = sim::initial_state(m.start.head<2>() + Eigen::Vector2d(0, offset),
                                       m.goal.head<2>());
    return sim::rollout_on_field(b.field, sim::AgentModel{}, st, cfg);
  };
  SECTION("constant w1, on axis") {
    const auto r = run(0.0, true);
    CHECK_FALSE(r.success);
    CHECK((r.termination == sim::Termination::kStalled ||
           r.termination == sim::Termination::kTimeout));
    for (const auto& s : r.trajectory) CHECK(s.state.root_xy.y() == sim::kDilemmaAxis);
  }
  SECTION("priority weighting, 0.01 m off axis, both sides") {
    for (double off : {0.01, -0.01}) {
      const auto r = run(off, false);
      CHECK(r.success);
      CHECK_FALSE(r.collided);
    }
  }
  SECTION("mirrored starts give mirrored trajectories") {
    const auto a = run(0.01, false);
    const auto c = run(-0.01, false);
    REQUIRE(a.trajectory.size() == c.trajectory.size());
    for (std::size_t n = 0; n < a.trajectory.size(); ++n) {
      const auto& p = a.trajectory[n].state.root_xy;
      const auto& q = c.trajectory[n].state.root_xy;
      CHECK(p.x() == Approx(q.x()).margin(1e-6));
      CHECK(p.y() - sim::kDilemmaAxis == Approx(sim::kDilemmaAxis - q.y()).margin(1e-6));
    }
  }
}
