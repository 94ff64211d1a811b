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

// HTTP front end for teleop sessions. Commands arrive as POST requests;
// each session's events (acks, errors, 10 Hz state frames) are streamed as
// server-sent events on GET /session/{id}/stream.

#ifndef FIELDNAV_TELEOP_SERVER_HPP_
#define FIELDNAV_TELEOP_SERVER_HPP_

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "fieldnav/config.hpp"
#include "fieldnav/teleop/session.hpp"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace fieldnav::teleop {

// Creates a session from a POST /session body: {"manifest": {...}} or
// {"gen": {"seed": n, "difficulty": d}}, plus optional partial "config".
// Throws ValidationError / ConfigError on bad input and SceneRejectedError
// when the scene cannot be used.
std::unique_ptr<Session> create_session(const nlohmann::json& body, const RunConfig& defaults,
                                        std::string id, SessionOptions options = {});

class Server {
 public:
  explicit Server(RunConfig defaults);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds (port 0 picks a free port) and serves on a background thread.
  // Returns the bound port; throws ConfigError when binding fails.
  int start(const std::string& host, int port);
  // Serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();

  std::shared_ptr<Session> session(const std::string& id) const;

 private:
  struct Runner;
  void routes();
  nlohmann::json open_session(const nlohmann::json& body);

  RunConfig defaults_;
  std::unique_ptr<httplib::Server> http_;
  std::thread listener_;
  std::atomic<bool> stopping_{false};
  mutable std::mutex mutex_;
  std::map<std::string, std::unique_ptr<Runner>> sessions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace fieldnav::teleop

#endif  // FIELDNAV_TELEOP_SERVER_HPP_
