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

// Click-and-Traverse session: one live simulation with a single writer
// (the tick loop), a command queue in and an event log out.

#ifndef FIELDNAV_TELEOP_SESSION_HPP_
#define FIELDNAV_TELEOP_SESSION_HPP_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "fieldnav/config.hpp"
#include "fieldnav/field/humanoid_field.hpp"
#include "fieldnav/scene/scene.hpp"
#include "fieldnav/sim/agent.hpp"
#include "json.hpp"

namespace fieldnav::teleop {

inline constexpr int kProto = 1;

enum class Status { kIdle, kTraversing, kReached, kCollided };
std::string_view to_string(Status s);

struct SnapResult {
  bool ok = false;
  Eigen::Vector3d goal = Eigen::Vector3d::Zero();
  std::string reason;
};

// Nearest walkable cell center within `radius` of the click (Euclidean
// distance between the click and the center; ties go to the lower cell
// index). The goal z is `z`.
SnapResult snap_goal(const scene::GroundMask& walkable, const Eigen::Vector2d& click,
                     double radius, double z);

// Blocked mask down-sampled by `stride`: a coarse cell is blocked when any
// of its fine cells is. Rows are strings of '0'/'1', row j at index j.
nlohmann::json mask_json(const scene::GroundMask& mask, int stride);

// Everything that changes the trajectory, in tick order.
struct LogEvent {
  enum class Kind { kGoal, kSwap, kTeleport };
  Kind kind = Kind::kGoal;
  std::uint64_t tick = 0;
  std::uint64_t seq = 0;                             // goal sequence number
  Eigen::Vector3d goal = Eigen::Vector3d::Zero();    // kGoal
  Eigen::Vector2d xy = Eigen::Vector2d::Zero();      // kTeleport
};

struct SessionLog {
  scene::SceneManifest scene;
  RunConfig config;
  std::vector<LogEvent> events;
  std::uint64_t ticks = 0;
};
nlohmann::json to_json(const SessionLog& log);
SessionLog session_log_from_json(const nlohmann::json& j);

// Builds a field; the session calls it off the tick thread.
using FieldBuilder = std::function<field::HumanoidField(
    const voxel::OccupancyGrid&, const Eigen::Vector3d&, const field::FieldParams&)>;

enum class RebuildMode {
  kAsync,  // rebuild on a worker thread; swap at the first tick it is ready
  kSync,   // rebuild immediately; swap at the next tick (deterministic)
};

struct SessionOptions {
  RebuildMode rebuild = RebuildMode::kAsync;
  FieldBuilder builder;  // empty: field::build_field
};

// Published stream events, numbered in publication order.
struct Event {
  std::uint64_t seq = 0;
  std::shared_ptr<const std::string> text;  // serialized JSON
};

class Session {
 public:
  // Throws SceneRejectedError when the scene fails certification and
  // ValidationError / ConfigError on bad input.
  Session(std::string id, scene::SceneManifest scene, RunConfig config,
          SessionOptions options = {});
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const { return id_; }
  const scene::SceneManifest& scene() const { return scene_; }
  const RunConfig& config() const { return config_; }
  const voxel::OccupancyGrid& grid() const { return grid_; }

  // Snaps and queues a goal, publishing the ack (or error) event first.
  // Returns the ack/error JSON. Thread-safe.
  nlohmann::json request_goal(const Eigen::Vector2d& click);
  // Queues a teleport of the root. Thread-safe.
  nlohmann::json request_teleport(const Eigen::Vector2d& xy);

  // One 10 Hz step: swap a finished rebuild, apply queued commands, run
  // the follower sub-steps, publish a state frame. Only the writer calls
  // this. Returns false once the session is frozen by an internal error.
  bool tick();

  // Latest state frame (the initial snapshot before the first tick).
  std::shared_ptr<const nlohmann::json> latest_frame() const;
  // {proto, type: "scene", manifest, mask}.
  nlohmann::json scene_json() const;
  SessionLog log() const;
  bool frozen() const;

  // Events with seq > after, waiting up to `timeout` for one to appear.
  // Older events than the retained window are skipped.
  std::vector<Event> events_after(std::uint64_t after, std::chrono::milliseconds timeout) const;
  std::uint64_t last_event_seq() const;

  // Agent state after every tick (index 0: initial state). Writer only.
  const std::vector<sim::AgentState>& history() const { return history_; }

 private:
  struct Command {
    enum class Kind { kGoal, kTeleport } kind;
    std::uint64_t seq;
    Eigen::Vector3d goal;
    Eigen::Vector2d xy;
  };
  struct Pending {
    std::uint64_t seq = 0;
    std::uint64_t tick = 0;
    Eigen::Vector3d goal;
    std::shared_future<std::shared_ptr<const field::HumanoidField>> field;
  };

  void publish(const nlohmann::json& event);
  nlohmann::json frame_json() const;
  void launch_rebuild(Pending& p);

  std::string id_;
  scene::SceneManifest scene_;
  RunConfig config_;
  SessionOptions options_;
  voxel::OccupancyGrid grid_;
  scene::GroundMask walkable_;
  scene::GroundMask blocked_;

  // Writer state.
  std::shared_ptr<const field::HumanoidField> field_;
  std::optional<Pending> pending_;
  std::vector<std::shared_future<std::shared_ptr<const field::HumanoidField>>> retired_;
  sim::AgentState agent_;
  std::vector<field::FieldQuery> queries_;
  Status status_ = Status::kIdle;
  std::uint64_t tick_ = 0;
  std::vector<sim::AgentState> history_;

  mutable std::mutex mutex_;  // guards everything below
  mutable std::condition_variable cv_;
  std::deque<Command> commands_;
  std::uint64_t next_goal_seq_ = 1;
  std::deque<Event> events_;
  std::uint64_t event_seq_ = 0;
  std::shared_ptr<const nlohmann::json> frame_;
  std::vector<LogEvent> log_;
  bool frozen_ = false;
  Status shared_status_ = Status::kIdle;
};

// Re-runs a recorded session with traversal-sim alone: fields are rebuilt
// at the logged goals and swapped at the logged ticks. Returns the agent
// state after every tick (index 0: initial state).
std::vector<sim::AgentState> replay(const SessionLog& log);

}  // namespace fieldnav::teleop

#endif  // FIELDNAV_TELEOP_SESSION_HPP_
