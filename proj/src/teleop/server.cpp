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

#include "fieldnav/teleop/server.hpp"

#include <chrono>
#include <condition_variable>

#include "fieldnav/errors.hpp"
#include "httplib.h"

namespace fieldnav::teleop {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json error_body(const std::string& code, const std::string& reason) {
  return {{"proto", kProto}, {"type", "error"}, {"code", code}, {"reason", reason}};
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("request body is not JSON: ") + e.what());
  }
}

Eigen::Vector2d read_xy(const json& j) {
  if (!j.is_object() || !j.contains("x") || !j.contains("y") || !j["x"].is_number() ||
      !j["y"].is_number()) {
    throw ValidationError("expected {\"x\": number, \"y\": number}");
  }
  for (const auto& item : j.items())
    if (item.key() != "x" && item.key() != "y")
      throw ValidationError("unknown key '" + item.key() + "'");
  return {j["x"].get<double>(), j["y"].get<double>()};
}

std::string sse(const Event& e) {
  return "id: " + std::to_string(e.seq) + "\ndata: " + *e.text + "\n\n";
}

}  // namespace

std::unique_ptr<Session> create_session(const json& body, const RunConfig& defaults,
                                        std::string id, SessionOptions options) {
  if (!body.is_object()) throw ValidationError("session request must be a JSON object");
  for (const auto& item : body.items()) {
    if (item.key() != "manifest" && item.key() != "gen" && item.key() != "config")
      throw ValidationError("unknown key '" + item.key() + "' in session request");
  }
  RunConfig cfg = body.contains("config") ? apply_config(body["config"], defaults) : defaults;
  cfg.validate();
  if (body.contains("manifest") == body.contains("gen"))
    throw ValidationError("session request needs exactly one of 'manifest' or 'gen'");
  scene::SceneManifest m;
  if (body.contains("manifest")) {
    m = scene::manifest_from_json(body["manifest"]);
  } else {
    const json& g = body["gen"];
    if (!g.is_object()) throw ValidationError("'gen' must be an object");
    std::uint64_t seed = cfg.run.seed;
    double difficulty = cfg.run.difficulty;
    for (const auto& [k, v] : g.items()) {
      if (k == "seed" && v.is_number_unsigned()) {
        seed = v.get<std::uint64_t>();
      } else if (k == "seed" && v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        seed = v.get<std::uint64_t>();
      } else if (k == "difficulty" && v.is_number()) {
        difficulty = v.get<double>();
      } else {
        throw ValidationError("bad or unknown key '" + k + "' in 'gen'");
      }
    }
    m = scene::generate_scene(seed, difficulty, cfg.scene).manifest;
  }
  return std::make_unique<Session>(std::move(id), std::move(m), std::move(cfg),
                                   std::move(options));
}

// A session plus the thread that ticks it.
struct Server::Runner {
  std::shared_ptr<Session> session;
  std::mutex mutex;
  std::condition_variable cv;
  bool stop = false;
  std::thread ticker;

  explicit Runner(std::shared_ptr<Session> s) : session(std::move(s)) {
    ticker = std::thread([this] {
      const auto period = std::chrono::duration_cast<Clock::duration>(
          std::chrono::duration<double>(session->config().teleop.tick_period));
      auto next = Clock::now();
      std::unique_lock lock(mutex);
      for (;;) {
        next += period;
        if (cv.wait_until(lock, next, [&] { return stop; })) return;
        lock.unlock();
        const bool alive = session->tick();
        lock.lock();
        if (!alive) return;
        // Skip missed deadlines instead of bursting to catch up.
        if (Clock::now() > next + period) next = Clock::now();
      }
    });
  }
  ~Runner() {
    {
      std::lock_guard lock(mutex);
      stop = true;
    }
    cv.notify_all();
    ticker.join();
  }
};

Server::Server(RunConfig defaults)
    : defaults_(std::move(defaults)), http_(std::make_unique<httplib::Server>()) {
  defaults_.validate();
  http_->new_task_queue = [] { return new httplib::ThreadPool(64); };
  routes();
}

Server::~Server() { stop(); }

json Server::open_session(const json& body) {
  std::string id;
  {
    std::lock_guard lock(mutex_);
    if (static_cast<int>(sessions_.size()) >= defaults_.teleop.max_sessions)
      throw CapacityError("session limit reached");
    id = "s" + std::to_string(next_id_++);
  }
  std::shared_ptr<Session> s = create_session(body, defaults_, id);
  json out = {{"proto", kProto}, {"id", id}, {"snapshot", *s->latest_frame()}};
  std::lock_guard lock(mutex_);
  sessions_.emplace(id, std::make_unique<Runner>(std::move(s)));
  return out;
}

std::shared_ptr<Session> Server::session(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second->session;
}

void Server::routes() {
  auto& svr = *http_;
  svr.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  svr.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  // Runs a handler for an existing session, mapping errors to responses.
  auto with_session = [this](auto handler) {
    return [this, handler](const httplib::Request& req, httplib::Response& res) {
      const auto s = session(req.matches[1]);
      if (!s) return reply(res, 404, error_body("not_found", "no session " + req.matches[1].str()));
      try {
        handler(*s, req, res);
      } catch (const ValidationError& e) {
        reply(res, 400, error_body("bad_request", e.what()));
      }
    };
  };

  svr.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
    std::lock_guard lock(mutex_);
    reply(res, 200, {{"proto", kProto}, {"status", "ok"}, {"sessions", sessions_.size()}});
  });

  svr.Post("/session", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      reply(res, 201, open_session(parse_body(req)));
    } catch (const SceneRejectedError& e) {
      reply(res, 422, error_body("scene_rejected", e.what()));
    } catch (const InvalidGoalError& e) {
      reply(res, 422, error_body("scene_rejected", e.what()));
    } catch (const CapacityError& e) {
      reply(res, 503, error_body("capacity", e.what()));
    } catch (const Error& e) {
      reply(res, 400, error_body("bad_request", e.what()));
    }
  });

  svr.Delete(R"(/session/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    std::unique_ptr<Runner> gone;
    {
      std::lock_guard lock(mutex_);
      const auto it = sessions_.find(req.matches[1]);
      if (it != sessions_.end()) {
        gone = std::move(it->second);
        sessions_.erase(it);
      }
    }
    if (!gone) return reply(res, 404, error_body("not_found", "no session " + req.matches[1].str()));
    gone.reset();
    reply(res, 200, {{"proto", kProto}, {"deleted", req.matches[1].str()}});
  });

  svr.Post(R"(/session/([^/]+)/goal)",
           with_session([](Session& s, const httplib::Request& req, httplib::Response& res) {
             const json r = s.request_goal(read_xy(parse_body(req)));
             reply(res, r["type"] == "ack" ? 200 : 422, r);
           }));

  svr.Post(R"(/session/([^/]+)/debug/teleport)",
           with_session([](Session& s, const httplib::Request& req, httplib::Response& res) {
             const json r = s.request_teleport(read_xy(parse_body(req)));
             reply(res, r["type"] == "ack" ? 200 : 422, r);
           }));

  svr.Get(R"(/session/([^/]+)/scene)",
          with_session([](Session& s, const httplib::Request&, httplib::Response& res) {
            reply(res, 200, s.scene_json());
          }));

  svr.Get(R"(/session/([^/]+)/state)",
          with_session([](Session& s, const httplib::Request&, httplib::Response& res) {
            reply(res, 200, *s.latest_frame());
          }));

  svr.Get(R"(/session/([^/]+)/log)",
          with_session([](Session& s, const httplib::Request&, httplib::Response& res) {
            reply(res, 200, to_json(s.log()));
          }));

  svr.Get(R"(/session/([^/]+)/stream)", [this](const httplib::Request& req,
                                                httplib::Response& res) {
    std::weak_ptr<Session> weak = session(req.matches[1]);
    if (weak.expired())
      return reply(res, 404, error_body("not_found", "no session " + req.matches[1].str()));
    res.set_header("Cache-Control", "no-cache");
    auto cursor = std::make_shared<std::uint64_t>(0);
    auto started = std::make_shared<bool>(false);
    auto idle_since = std::make_shared<Clock::time_point>(Clock::now());
    res.set_chunked_content_provider(
        "text/event-stream",
        [this, weak, cursor, started, idle_since](std::size_t, httplib::DataSink& sink) {
          const auto s = weak.lock();
          if (!s || stopping_) {
            sink.done();
            return true;
          }
          std::string out;
          if (!*started) {
            *started = true;
            // Cursor first, then the snapshot: anything published after the
            // cursor follows the snapshot, so nothing is lost.
            *cursor = s->last_event_seq();
            const json hello = {{"proto", kProto}, {"type", "hello"}, {"id", s->id()}};
            out += "data: " + hello.dump() + "\n\n";
            out += "data: " + s->latest_frame()->dump() + "\n\n";
          }
          for (const auto& e : s->events_after(*cursor, std::chrono::milliseconds(200))) {
            out += sse(e);
            *cursor = e.seq;
          }
          if (out.empty() && Clock::now() - *idle_since > std::chrono::seconds(2)) {
            out = ": keepalive\n\n";
          }
          if (out.empty()) return true;
          *idle_since = Clock::now();
          return sink.write(out.data(), out.size());
        });
  });
}

int Server::start(const std::string& host, int port) {
  const int bound = port == 0 ? http_->bind_to_any_port(host) : (http_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw ConfigError("cannot bind " + host + ":" + std::to_string(port));
  listener_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return bound;
}

void Server::run(const std::string& host, int port) {
  if (!http_->bind_to_port(host, port))
    throw ConfigError("cannot bind " + host + ":" + std::to_string(port));
  http_->listen_after_bind();
}

void Server::stop() {
  if (stopping_.exchange(true)) return;
  http_->stop();
  if (listener_.joinable()) listener_.join();
  std::lock_guard lock(mutex_);
  sessions_.clear();
}

}  // namespace fieldnav::teleop
