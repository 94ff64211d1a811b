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

#include "fieldnav/sim/rollout.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "fieldnav/errors.hpp"
#include "fieldnav/scene/random.hpp"
#include "fieldnav/vmf/vmf.hpp"

namespace fieldnav::sim {
namespace {

nlohmann::json vec(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }
nlohmann::json vec(const Eigen::Vector2d& v) { return {v.x(), v.y()}; }

double reward(const field::HumanoidField& field,
              const std::vector<field::FieldQuery>& queries,
              const std::vector<field::BodyPartState>& parts) {
  std::vector<vmf::VmfPrior> priors;
  std::vector<vmf::MotionSample> motion;
  priors.reserve(queries.size());
  motion.reserve(parts.size());
  for (const auto& q : queries) priors.push_back(vmf::derive_prior(q, field.params.kappa_max));
  for (const auto& p : parts) motion.push_back(vmf::motion_from_velocity(p.velocity));
  return vmf::r_field(priors, motion);
}

std::vector<field::FieldQuery> query_all(const field::HumanoidField& field,
                                         const std::vector<field::BodyPartState>& parts,
                                         const field::QueryOptions& options) {
  std::vector<field::FieldQuery> out;
  out.reserve(parts.size());
  for (const auto& p : parts) out.push_back(field::query_humanoid_pf(field, p, options));
  return out;
}

}  // namespace

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kReached: return "reached";
    case Termination::kTimeout: return "timeout";
    case Termination::kCollision: return "collision";
    case Termination::kStalled: return "stalled";
  }
  return "unknown";
}

void RolloutConfig::validate() const {
  if (!(dt > 0.0 && dt <= 0.1)) throw ValidationError("rollout dt must be in (0, 0.1]");
  if (!(time_limit > 0.0) || !(time_per_meter >= 0.0)) {
    throw ValidationError("rollout time limits must be positive");
  }
  if (!(success_radius > 0.0)) throw ValidationError("success_radius must be > 0");
  if (!(stall_window > 0.0) || !(stall_distance >= 0.0)) {
    throw ValidationError("stall window and distance must be positive");
  }
  if (!(trial_jitter >= 0.0)) throw ValidationError("trial_jitter must be >= 0");
  if (!std::isfinite(w1_value)) throw ValidationError("w1_value must be finite");
}

double RolloutConfig::limit_for(double distance, double max_speed) const {
  return std::max(time_limit, time_per_meter * distance / max_speed);
}

RolloutResult rollout_on_field(const field::HumanoidField& field, const AgentModel& model,
                               const AgentState& start, const RolloutConfig& cfg) {
  cfg.validate();
  model.validate();
  FollowerOptions options;
  options.reverse_field = cfg.reverse_field;
  options.query.constant_w1 = cfg.constant_w1;
  options.query.w1_value = cfg.w1_value;

  const Eigen::Vector2d goal = field.goal.head<2>();
  auto distance = [&](const AgentState& s) { return (s.root_xy - goal).norm(); };
  const double limit = cfg.limit_for(distance(start), model.max_speed);
  const auto stall_steps = std::max<long>(1, std::lround(cfg.stall_window / cfg.dt));

  RolloutResult res;
  AgentState state = start;
  auto parts = derive_parts(model, state);
  {
    TrajectoryStep first;
    first.state = state;
    first.queries = query_all(field, parts, options.query);
    first.r_field = reward(field, first.queries, parts);
    res.trajectory.push_back(std::move(first));
  }
  res.de = distance(state);
  res.min_clearance = min_clearance(field.sdf, parts);
  std::vector<Eigen::Vector2d> path{state.root_xy};

  if (check_collision(field.sdf, parts)) {
    res.collided = true;
    res.termination = Termination::kCollision;
    return res;
  }
  for (long n = 1;; ++n) {
    if (distance(state) <= cfg.success_radius) {
      res.termination = Termination::kReached;
      break;
    }
    if ((n - 1) * cfg.dt >= limit - 1e-9) {
      res.termination = Termination::kTimeout;
      break;
    }
    FollowerStep step = step_follower_detailed(field, model, state, cfg.dt, options);
    state = step.state;
    parts = derive_parts(model, state);

    TrajectoryStep rec;
    rec.t = n * cfg.dt;
    rec.state = state;
    rec.r_field = reward(field, step.queries, parts);
    rec.queries = std::move(step.queries);
    res.trajectory.push_back(std::move(rec));
    res.time_used = n * cfg.dt;
    res.de = std::min(res.de, distance(state));
    res.min_clearance = std::min(res.min_clearance, min_clearance(field.sdf, parts));
    path.push_back(state.root_xy);

    if (check_collision(field.sdf, parts)) {
      res.collided = true;
      res.termination = Termination::kCollision;
      break;
    }
    if (n >= stall_steps && (path[n] - path[n - stall_steps]).norm() < cfg.stall_distance) {
      res.termination = Termination::kStalled;
      break;
    }
  }
  res.success = res.termination == Termination::kReached && !res.collided;
  return res;
}

RolloutResult run_rollout(const scene::SceneManifest& scene, const AgentModel& model,
                          const field::FieldParams& params, const RolloutConfig& cfg) {
  const auto grid = scene::scene_grid(scene);
  const auto field = field::build_field(grid, scene.goal, params);
  return rollout_on_field(field, model,
                          initial_state(scene.start.head<2>(), scene.goal.head<2>()), cfg);
}

nlohmann::json trace_record(const TrajectoryStep& step) {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& q : step.queries) {
    parts.push_back({{"pos", vec(q.part.position)}, {"f_h", vec(q.f_h)}, {"kappa", q.kappa}});
  }
  return {{"t", step.t},
          {"root_xy", vec(step.state.root_xy)},
          {"height_scale", step.state.height_scale},
          {"lean", step.state.lean},
          {"lift", step.state.lift},
          {"parts", std::move(parts)},
          {"r_field", step.r_field}};
}

void write_trace(const RolloutResult& result, std::ostream& out) {
  for (const auto& step : result.trajectory) out << trace_record(step).dump() << '\n';
}

nlohmann::json summary_json(const RolloutResult& r) {
  return {{"success", r.success},
          {"collided", r.collided},
          {"termination", std::string(to_string(r.termination))},
          {"time_used", r.time_used},
          {"de", r.de},
          {"min_clearance", r.min_clearance},
          {"steps", r.trajectory.size()}};
}

scene::SceneManifest dilemma_scenario() {
  scene::SceneManifest m;
  m.seed = 0;
  m.difficulty = 0.0;
  m.room = Eigen::Vector3d(4.0, 2.0 * kDilemmaAxis, 2.0);
  m.resolution = 0.05;
  m.walls = true;
  OrientedBox wall;
  wall.center = Eigen::Vector3d(1.8, kDilemmaAxis, 1.0);
  wall.half_extents = Eigen::Vector3d(0.1, 0.61, 1.5);
  wall.anchor = Anchor::kFloor;
  m.boxes.push_back(wall);
  m.perlin = {0.0, 0.4, 1};
  m.morph_radius_vox = 0;
  m.start = Eigen::Vector3d(0.8, kDilemmaAxis, 0.6);
  m.goal = Eigen::Vector3d(2.8, kDilemmaAxis, 0.6);
  return m;
}

nlohmann::json Evaluation::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& t : trials) {
    rows.push_back({{"scene", t.scene},
                    {"seed", t.seed},
                    {"trial", t.trial},
                    {"success", t.success},
                    {"collided", t.collided},
                    {"time_used", t.time_used},
                    {"de", t.de},
                    {"termination", std::string(to_string(t.termination))}});
  }
  return {{"sr", sr}, {"de_mean", de_mean}, {"de_mean_success", de_mean_success},
          {"trials", std::move(rows)}};
}

std::string Evaluation::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "scene,seed,trial,success,collided,time_used,de,termination\n";
  for (const auto& t : trials) {
    out << t.scene << ',' << t.seed << ',' << t.trial << ',' << t.success << ','
        << t.collided << ',' << t.time_used << ',' << t.de << ',' << to_string(t.termination)
        << '\n';
  }
  return out.str();
}

Evaluation summarize(std::vector<TrialRecord> trials) {
  if (trials.empty()) throw ValidationError("no trials to summarize");
  Evaluation ev;
  int successes = 0;
  double de_all = 0.0, de_ok = 0.0;
  for (const auto& t : trials) {
    de_all += t.de;
    if (t.success) {
      ++successes;
      de_ok += t.de;
    }
  }
  ev.sr = 100.0 * successes / static_cast<double>(trials.size());
  ev.de_mean = de_all / static_cast<double>(trials.size());
  ev.de_mean_success = successes > 0 ? de_ok / successes : 0.0;
  ev.trials = std::move(trials);
  return ev;
}

Eigen::Vector2d trial_start(const scene::SceneManifest& scene, int trial,
                            const RolloutConfig& cfg) {
  const Eigen::Vector2d start = scene.start.head<2>();
  if (trial == 0) return start;
  scene::StreamRng rng(scene.seed, scene::Stream::kTrial, static_cast<std::uint64_t>(trial));
  const double r = cfg.trial_jitter * std::sqrt(rng.uniform());
  const double a = 2.0 * std::numbers::pi * rng.uniform();
  return start + r * Eigen::Vector2d(std::cos(a), std::sin(a));
}

int default_threads() {
  if (const char* env = std::getenv("FIELDNAV_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1) {
      throw ConfigError(std::string("FIELDNAV_THREADS must be a positive integer, got '") +
                        env + "'");
    }
    return static_cast<int>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Evaluation evaluate(std::span<const scene::SceneManifest> scenes, const AgentModel& model,
                    const field::FieldParams& params, const RolloutConfig& cfg, int trials,
                    int threads) {
  if (scenes.empty()) throw ValidationError("evaluate needs at least one scene");
  if (trials < 1) throw ValidationError("evaluate needs at least one trial per scene");
  cfg.validate();
  model.validate();
  params.validate();
  const int workers =
      std::max(1, std::min<int>(threads > 0 ? threads : default_threads(),
                                static_cast<int>(scenes.size())));

  Evaluation ev;
  ev.trials.resize(scenes.size() * trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < scenes.size(); i = next++) {
      try {
        const auto& sc = scenes[i];
        const auto grid = scene::scene_grid(sc);
        const auto field = field::build_field(grid, sc.goal, params);
        for (int t = 0; t < trials; ++t) {
          const auto start = initial_state(trial_start(sc, t, cfg), sc.goal.head<2>());
          const auto r = rollout_on_field(field, model, start, cfg);
          ev.trials[i * trials + t] = {i, sc.seed, t, r.success, r.collided,
                                       r.time_used, r.de, r.termination};
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return summarize(std::move(ev.trials));
}

}  // namespace fieldnav::sim
