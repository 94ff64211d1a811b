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

#include "fieldnav/teleop/session.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "fieldnav/errors.hpp"

namespace fieldnav::teleop {

namespace {

using nlohmann::json;

constexpr std::size_t kRetainedEvents = 1024;

json vec(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }
json vec(const Eigen::Vector2d& v) { return json::array({v.x(), v.y()}); }

Eigen::Vector3d read_vec3(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}
Eigen::Vector2d read_vec2(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

std::string_view kind_name(LogEvent::Kind k) {
  switch (k) {
    case LogEvent::Kind::kGoal: return "goal";
    case LogEvent::Kind::kSwap: return "swap";
    case LogEvent::Kind::kTeleport: return "teleport";
  }
  return "goal";
}

sim::AgentState held(sim::AgentState s) {
  s.root_velocity.setZero();
  s.crouch_rate = s.lean_rate = s.lift_rate = 0.0;
  return s;
}

void face(sim::AgentState& s, const Eigen::Vector3d& goal) {
  const Eigen::Vector2d d = goal.head<2>() - s.root_xy;
  if (d.norm() > 0.0) s.heading = std::atan2(d.y(), d.x());
}

// Motion rule shared by the live session and replay.
struct Motion {
  const RunConfig& cfg;
  const voxel::OccupancyGrid& grid;

  // Parts outside the sampled volume lie in the wall ring: a collision.
  bool colliding(const field::HumanoidField& f, const sim::AgentState& s) const {
    const auto parts = sim::derive_parts(cfg.agent, s);
    for (const auto& p : parts)
      if (!f.sdf.spec.in_sampling_box(p.position)) return true;
    return sim::check_collision(f.sdf, parts);
  }
  bool at_goal(const field::HumanoidField& f, const sim::AgentState& s) const {
    return (s.root_xy - f.goal.head<2>()).norm() <= cfg.rollout.success_radius;
  }

  Status teleport(const field::HumanoidField& f, sim::AgentState& s, const Eigen::Vector2d& xy,
                  Status status) const {
    s = held(s);
    s.root_xy = xy;
    if (colliding(f, s)) return Status::kCollided;
    return status == Status::kIdle ? Status::kIdle : Status::kTraversing;
  }

  // Runs one tick of sub-steps. `hold` zeroes the command (rebuild late).
  Status advance(const field::HumanoidField& f, sim::AgentState& s, Status status,
                 bool pending, bool hold) const {
    if (status != Status::kTraversing) {
      s = held(s);
      return status;
    }
    sim::FollowerOptions opt;
    opt.query.constant_w1 = cfg.rollout.constant_w1;
    opt.query.w1_value = cfg.rollout.w1_value;
    for (int n = 0; n < cfg.teleop.substeps; ++n) {
      if (!pending && at_goal(f, s)) {
        s = held(s);
        return Status::kReached;
      }
      if (hold) {
        s = held(s);
        continue;
      }
      s = sim::step_follower(f, cfg.agent, s, cfg.rollout.dt, opt);
      if (colliding(f, s)) {
        s = held(s);
        return Status::kCollided;
      }
    }
    if (!pending && at_goal(f, s)) {
      s = held(s);
      return Status::kReached;
    }
    return status;
  }
};

field::HumanoidField default_build(const voxel::OccupancyGrid& g, const Eigen::Vector3d& goal,
                                   const field::FieldParams& p) {
  return field::build_field(g, goal, p);
}

}  // namespace

std::string_view to_string(Status s) {
  switch (s) {
    case Status::kIdle: return "idle";
    case Status::kTraversing: return "traversing";
    case Status::kReached: return "reached";
    case Status::kCollided: return "collided";
  }
  return "idle";
}

SnapResult snap_goal(const scene::GroundMask& walkable, const Eigen::Vector2d& click,
                     double radius, double z) {
  SnapResult out;
  const auto c = walkable.cell_of(click);
  const int reach = static_cast<int>(std::ceil(radius / walkable.resolution)) + 1;
  double best = std::numeric_limits<double>::infinity();
  for (int j = c[1] - reach; j <= c[1] + reach; ++j)
    for (int i = c[0] - reach; i <= c[0] + reach; ++i) {
      if (!walkable.in_bounds(i, j) || walkable.at(i, j)) continue;
      const Eigen::Vector2d p = walkable.cell_center(i, j);
      const double d = (p - click).norm();
      if (d <= radius && d < best) {
        best = d;
        out.goal = Eigen::Vector3d(p.x(), p.y(), z);
        out.ok = true;
      }
    }
  if (!out.ok) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "no walkable cell within %.2f m of (%.3f, %.3f)", radius,
                  click.x(), click.y());
    out.reason = buf;
  }
  return out;
}

nlohmann::json mask_json(const scene::GroundMask& mask, int stride) {
  if (stride < 1) throw ValidationError("mask stride must be >= 1");
  const int nx = (mask.nx + stride - 1) / stride;
  const int ny = (mask.ny + stride - 1) / stride;
  json rows = json::array();
  for (int J = 0; J < ny; ++J) {
    std::string row(nx, '0');
    for (int I = 0; I < nx; ++I)
      for (int j = J * stride; j < std::min(mask.ny, (J + 1) * stride); ++j)
        for (int i = I * stride; i < std::min(mask.nx, (I + 1) * stride); ++i)
          if (mask.at(i, j)) row[I] = '1';
    rows.push_back(std::move(row));
  }
  return {{"nx", nx},
          {"ny", ny},
          {"resolution", mask.resolution * stride},
          {"origin", vec(mask.origin)},
          {"rows", std::move(rows)}};
}

json to_json(const SessionLog& log) {
  json events = json::array();
  for (const auto& e : log.events) {
    json j = {{"tick", e.tick}, {"type", std::string(kind_name(e.kind))}};
    if (e.kind != LogEvent::Kind::kTeleport) j["seq"] = e.seq;
    if (e.kind == LogEvent::Kind::kGoal) j["goal"] = vec(e.goal);
    if (e.kind == LogEvent::Kind::kTeleport) j["xy"] = vec(e.xy);
    events.push_back(std::move(j));
  }
  return {{"proto", kProto},
          {"scene", scene::to_json(log.scene)},
          {"config", to_json(log.config)},
          {"events", std::move(events)},
          {"ticks", log.ticks}};
}

SessionLog session_log_from_json(const nlohmann::json& j) {
  try {
    if (j.at("proto") != kProto) throw ValidationError("unsupported session log proto");
    SessionLog log;
    log.scene = scene::manifest_from_json(j.at("scene"));
    log.config = apply_config(j.at("config"));
    log.ticks = j.at("ticks").get<std::uint64_t>();
    for (const auto& e : j.at("events")) {
      LogEvent ev;
      ev.tick = e.at("tick").get<std::uint64_t>();
      const std::string type = e.at("type").get<std::string>();
      if (type == "goal") {
        ev.kind = LogEvent::Kind::kGoal;
        ev.seq = e.at("seq").get<std::uint64_t>();
        ev.goal = read_vec3(e.at("goal"));
      } else if (type == "swap") {
        ev.kind = LogEvent::Kind::kSwap;
        ev.seq = e.at("seq").get<std::uint64_t>();
      } else if (type == "teleport") {
        ev.kind = LogEvent::Kind::kTeleport;
        ev.xy = read_vec2(e.at("xy"));
      } else {
        throw ValidationError("unknown session log event '" + type + "'");
      }
      log.events.push_back(ev);
    }
    return log;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed session log: ") + e.what());
  }
}

Session::Session(std::string id, scene::SceneManifest scene, RunConfig config,
                 SessionOptions options)
    : id_(std::move(id)),
      scene_(std::move(scene)),
      config_(std::move(config)),
      options_(std::move(options)) {
  config_.validate();
  scene_.validate();
  if (!options_.builder) options_.builder = default_build;
  grid_ = scene::scene_grid(scene_);
  const auto& sc = config_.scene;
  if (!scene::certify_traversable(grid_, scene_.start, scene_.goal, sc.agent_radius) ||
      !scene::certify_walkable(grid_, scene_.start, scene_.goal, sc.agent_radius,
                               sc.body_band)) {
    throw SceneRejectedError("scene is not traversable from start to goal");
  }
  walkable_ = scene::erode_walkable(grid_, sc.walkable_radius, sc.height_band);
  blocked_ = scene::project_ground(grid_, sc.height_band);
  field_ = std::make_shared<const field::HumanoidField>(
      options_.builder(grid_, scene_.goal, config_.field));
  agent_ = sim::initial_state(scene_.start.head<2>(), scene_.goal.head<2>());
  history_.push_back(agent_);
  frame_ = std::make_shared<const json>(frame_json());
}

Session::~Session() = default;

void Session::publish(const json& event) {
  // Caller holds mutex_.
  events_.push_back({++event_seq_, std::make_shared<const std::string>(event.dump())});
  while (events_.size() > kRetainedEvents) events_.pop_front();
  cv_.notify_all();
}

json Session::request_goal(const Eigen::Vector2d& click) {
  auto reject = [&](const std::string& code, const std::string& reason) {
    json err = {{"proto", kProto}, {"type", "error"},  {"code", code},
                {"reason", reason}, {"click", vec(click)}};
    std::lock_guard lock(mutex_);
    publish(err);
    return err;
  };
  if (!std::isfinite(click.x()) || !std::isfinite(click.y()) || click.x() < 0.0 ||
      click.y() < 0.0 || click.x() > scene_.room.x() || click.y() > scene_.room.y()) {
    return reject("goal_rejected", "click lies outside the room");
  }
  const SnapResult snap =
      snap_goal(walkable_, click, config_.teleop.snap_radius, config_.scene.anchor_height);
  if (!snap.ok) return reject("goal_rejected", snap.reason);
  std::lock_guard lock(mutex_);
  if (frozen_) {
    json err = {{"proto", kProto}, {"type", "error"}, {"code", "frozen"},
                {"reason", "session stopped after an internal error"}, {"click", vec(click)}};
    publish(err);
    return err;
  }
  if (shared_status_ == Status::kCollided) {
    json err = {{"proto", kProto}, {"type", "error"}, {"code", "goal_rejected"},
                {"reason", "agent is in collision"}, {"click", vec(click)}};
    publish(err);
    return err;
  }
  const std::uint64_t seq = next_goal_seq_++;
  json ack = {{"proto", kProto}, {"type", "ack"},         {"seq", seq},
              {"goal", vec(snap.goal)}, {"click", vec(click)}};
  publish(ack);
  commands_.push_back({Command::Kind::kGoal, seq, snap.goal, Eigen::Vector2d::Zero()});
  return ack;
}

json Session::request_teleport(const Eigen::Vector2d& xy) {
  std::lock_guard lock(mutex_);
  const auto spec = grid_.spec;
  const Eigen::Vector3d lo = spec.origin, hi = spec.origin + spec.extent();
  if (!(xy.x() >= lo.x() && xy.y() >= lo.y() && xy.x() <= hi.x() && xy.y() <= hi.y())) {
    json err = {{"proto", kProto}, {"type", "error"}, {"code", "teleport_rejected"},
                {"reason", "target lies outside the room"}};
    publish(err);
    return err;
  }
  json ack = {{"proto", kProto}, {"type", "ack"}, {"teleport", vec(xy)}};
  publish(ack);
  commands_.push_back({Command::Kind::kTeleport, 0, Eigen::Vector3d::Zero(), xy});
  return ack;
}

void Session::launch_rebuild(Pending& p) {
  using Ptr = std::shared_ptr<const field::HumanoidField>;
  auto build = [builder = options_.builder, &grid = grid_, goal = p.goal,
                params = config_.field]() -> Ptr {
    return std::make_shared<const field::HumanoidField>(builder(grid, goal, params));
  };
  if (options_.rebuild == RebuildMode::kSync) {
    std::promise<Ptr> done;
    try {
      done.set_value(build());
    } catch (...) {
      done.set_exception(std::current_exception());
    }
    p.field = done.get_future().share();
  } else {
    p.field = std::async(std::launch::async, build).share();
  }
}

bool Session::tick() {
  {
    std::lock_guard lock(mutex_);
    if (frozen_) return false;
  }
  const std::uint64_t n = tick_ + 1;
  const Motion motion{config_, grid_};
  std::vector<LogEvent> logged;
  try {
    if (pending_ &&
        pending_->field.wait_for(std::chrono::seconds(0)) == std::future_status::ready) {
      field_ = pending_->field.get();
      face(agent_, field_->goal);
      logged.push_back({LogEvent::Kind::kSwap, n, pending_->seq, {}, {}});
      pending_.reset();
    }
    std::deque<Command> cmds;
    {
      std::lock_guard lock(mutex_);
      cmds.swap(commands_);
    }
    for (const auto& c : cmds) {
      if (c.kind == Command::Kind::kGoal) {
        if (pending_) retired_.push_back(pending_->field);
        pending_ = Pending{c.seq, n, c.goal, {}};
        launch_rebuild(*pending_);
        status_ = Status::kTraversing;
        logged.push_back({LogEvent::Kind::kGoal, n, c.seq, c.goal, {}});
      } else {
        status_ = motion.teleport(*field_, agent_, c.xy, status_);
        logged.push_back({LogEvent::Kind::kTeleport, n, 0, {}, c.xy});
      }
    }
    std::erase_if(retired_, [](const auto& f) {
      return f.wait_for(std::chrono::seconds(0)) == std::future_status::ready;
    });
    const bool hold = pending_ && n > pending_->tick;
    status_ = motion.advance(*field_, agent_, status_, pending_.has_value(), hold);
    tick_ = n;
    history_.push_back(agent_);
    auto frame = std::make_shared<const json>(frame_json());
    std::lock_guard lock(mutex_);
    log_.insert(log_.end(), logged.begin(), logged.end());
    shared_status_ = status_;
    frame_ = frame;
    publish(*frame);
    return true;
  } catch (const std::exception& e) {
    std::lock_guard lock(mutex_);
    log_.insert(log_.end(), logged.begin(), logged.end());
    frozen_ = true;
    publish({{"proto", kProto}, {"type", "error"}, {"code", "internal"},
             {"reason", e.what()}, {"tick", n}});
    return false;
  }
}

json Session::frame_json() const {
  json parts = json::array();
  for (const auto& p : sim::derive_parts(config_.agent, agent_)) {
    Eigen::Vector3d f_h = Eigen::Vector3d::Zero();
    if (field_->spec().in_sampling_box(p.position)) f_h = field::query_humanoid_pf(*field_, p).f_h;
    parts.push_back({{"xy_z", vec(p.position)}, {"f_h", vec(f_h)}});
  }
  const double t = static_cast<double>(tick_) * config_.teleop.substeps * config_.rollout.dt;
  return {{"proto", kProto},
          {"type", "state"},
          {"tick", tick_},
          {"t", t},
          {"agent",
           {{"xy", vec(agent_.root_xy)},
            {"heading", agent_.heading},
            {"height_scale", agent_.height_scale},
            {"lean", agent_.lean},
            {"lift", agent_.lift}}},
          {"parts", std::move(parts)},
          {"goal", vec(field_->goal)},
          {"pending_goal", pending_ ? vec(pending_->goal) : json(nullptr)},
          {"holding", pending_.has_value() && tick_ > pending_->tick},
          {"status", std::string(to_string(status_))}};
}

std::shared_ptr<const json> Session::latest_frame() const {
  std::lock_guard lock(mutex_);
  return frame_;
}

json Session::scene_json() const {
  return {{"proto", kProto},
          {"type", "scene"},
          {"id", id_},
          {"manifest", scene::to_json(scene_)},
          {"mask", mask_json(blocked_, config_.teleop.mask_stride)}};
}

SessionLog Session::log() const {
  std::lock_guard lock(mutex_);
  SessionLog out;
  out.scene = scene_;
  out.config = config_;
  out.events = log_;
  out.ticks = frame_->at("tick").get<std::uint64_t>();
  return out;
}

bool Session::frozen() const {
  std::lock_guard lock(mutex_);
  return frozen_;
}

std::vector<Event> Session::events_after(std::uint64_t after,
                                         std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  cv_.wait_for(lock, timeout, [&] { return event_seq_ > after; });
  std::vector<Event> out;
  for (const auto& e : events_)
    if (e.seq > after) out.push_back(e);
  return out;
}

std::uint64_t Session::last_event_seq() const {
  std::lock_guard lock(mutex_);
  return event_seq_;
}

std::vector<sim::AgentState> replay(const SessionLog& log) {
  log.config.validate();
  const auto grid = scene::scene_grid(log.scene);
  const Motion motion{log.config, grid};
  auto field = std::make_shared<const field::HumanoidField>(
      field::build_field(grid, log.scene.goal, log.config.field));
  sim::AgentState agent =
      sim::initial_state(log.scene.start.head<2>(), log.scene.goal.head<2>());
  Status status = Status::kIdle;
  struct Goal {
    std::uint64_t tick;
    Eigen::Vector3d goal;
  };
  std::map<std::uint64_t, Goal> goals;
  std::optional<std::uint64_t> pending;

  std::vector<sim::AgentState> out{agent};
  std::size_t e = 0;
  for (std::uint64_t n = 1; n <= log.ticks; ++n) {
    for (; e < log.events.size() && log.events[e].tick == n; ++e) {
      const LogEvent& ev = log.events[e];
      switch (ev.kind) {
        case LogEvent::Kind::kSwap: {
          const auto it = goals.find(ev.seq);
          if (it == goals.end()) throw ValidationError("swap of an unknown goal");
          field = std::make_shared<const field::HumanoidField>(
              field::build_field(grid, it->second.goal, log.config.field));
          face(agent, field->goal);
          if (pending == ev.seq) pending.reset();
          break;
        }
        case LogEvent::Kind::kGoal:
          goals[ev.seq] = {n, ev.goal};
          pending = ev.seq;
          status = Status::kTraversing;
          break;
        case LogEvent::Kind::kTeleport:
          status = motion.teleport(*field, agent, ev.xy, status);
          break;
      }
    }
    if (e < log.events.size() && log.events[e].tick < n) {
      throw ValidationError("session log events are out of tick order");
    }
    const bool hold = pending && n > goals[*pending].tick;
    status = motion.advance(*field, agent, status, pending.has_value(), hold);
    out.push_back(agent);
  }
  return out;
}

}  // namespace fieldnav::teleop
