// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/service/server.hpp"

#include <random>
#include <regex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"

namespace goalcoach {

struct CoachService::Http {
  httplib::Server server;
  std::thread thread;
};

namespace {

ApiResponse json_response(int status, const Json& body) { return ApiResponse{status, body.dump(), "application/json"}; }

ApiResponse error_response(int status, std::string_view type, const std::string& message) {
  return json_response(status, {{"error", {{"status", status}, {"type", type}, {"message", message}}}});
}

std::string iso_time(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json parse_body(const std::string& body) {
  if (trim(body).empty()) return Json::object();
  return Json::parse(body);
}

// Reads {"text": ...}. Returns nullopt and fills `err` on a bad body.
std::optional<std::string> read_text(const ApiRequest& req, ApiResponse* err) {
  Json j;
  try {
    j = parse_body(req.body);
  } catch (const Json::exception& e) {
    *err = error_response(400, "bad_request", std::string("invalid JSON: ") + e.what());
    return std::nullopt;
  }
  if (!j.is_object() || !j.contains("text") || !j.at("text").is_string()) {
    *err = error_response(422, "validation_error", "body must be {\"text\": string}");
    return std::nullopt;
  }
  return j.at("text").get<std::string>();
}

}  // namespace

CoachService::CoachService(ServiceOptions options) : options_(std::move(options)) {
  if (options_.backends.find("default") == options_.backends.end()) {
    throw ConfigError("service needs a backend set named 'default'");
  }
  for (const auto& [name, set] : options_.backends) set.validate();
  options_.defaults.validate();
  std::random_device rd;
  id_salt_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

CoachService::~CoachService() { stop(); }

std::size_t CoachService::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

std::string CoachService::new_session_id() {
  // Counter in the low half keeps ids unique for the life of the process.
  const std::uint64_t n = ++counter_;
  char buf[40];
  std::snprintf(buf, sizeof buf, "s_%016llx%08llx", static_cast<unsigned long long>(mix_seed(id_salt_, n)),
                static_cast<unsigned long long>(n));
  return buf;
}

ApiResponse CoachService::create_session(const ApiRequest& req) {
  Json body;
  try {
    body = parse_body(req.body);
  } catch (const Json::exception& e) {
    return error_response(400, "bad_request", std::string("invalid JSON: ") + e.what());
  }
  if (!body.is_object()) return error_response(400, "bad_request", "body must be a JSON object");
  std::string backend_name = "default";
  if (body.contains("backends")) {
    if (!body.at("backends").is_string()) return error_response(400, "config_error", "backends must be a string");
    backend_name = body.at("backends").get<std::string>();
    body.erase("backends");
  }
  const auto it = options_.backends.find(backend_name);
  if (it == options_.backends.end()) {
    return error_response(400, "config_error", "unknown backend set '" + backend_name + "'");
  }
  Json merged = options_.defaults.to_json();
  for (const auto& [k, v] : body.items()) {
    if (k == "decode" && v.is_object()) {
      for (const auto& [dk, dv] : v.items()) merged["decode"][dk] = dv;
    } else {
      merged[k] = v;
    }
  }
  SessionConfig cfg;
  try {
    cfg = SessionConfig::from_json(merged);
  } catch (const ConfigError& e) {
    return error_response(400, "config_error", e.what());
  }
  std::unique_lock lock(sessions_mutex_);
  const std::string id = new_session_id();
  auto s = std::make_shared<ApiSession>(it->second, cfg, backend_name);
  sessions_.emplace(id, s);
  return json_response(201, {{"session_id", id},
                             {"config", cfg.to_json()},
                             {"backends", backend_name},
                             {"created_at", iso_time(s->created_at)}});
}

ApiResponse CoachService::with_session(const std::string& id, const std::function<ApiResponse(ApiSession&)>& fn) {
  std::shared_ptr<ApiSession> s;
  {
    std::shared_lock lock(sessions_mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return error_response(404, "not_found", "unknown session '" + id + "'");
    s = it->second;
  }
  std::lock_guard guard(s->mutex);
  return fn(*s);
}

ApiResponse CoachService::handle(const ApiRequest& req) {
  try {
    if (options_.token) {
      auto header = [&](const std::string& name) -> std::string {
        const auto it = req.headers.find(name);
        return it == req.headers.end() ? "" : it->second;
      };
      const std::string bearer = header("authorization");
      const bool ok = bearer == "Bearer " + *options_.token || header("x-goalcoach-token") == *options_.token;
      if (!ok) return error_response(401, "unauthorized", "missing or invalid token");
    }
    if (req.method == "GET" && req.path == "/health") {
      Json sets = Json::object();
      for (const auto& [name, set] : options_.backends) sets[name] = set.describe();
      return json_response(200, {{"status", "ok"}, {"backends", sets}, {"sessions", session_count()}});
    }
    if (req.method == "POST" && req.path == "/sessions") return create_session(req);

    static const std::regex route(R"(^/sessions/([A-Za-z0-9_\-]+)(/([a-z\-]+))?$)");
    std::smatch m;
    if (!std::regex_match(req.path, m, route)) return error_response(404, "not_found", "no route for " + req.path);
    const std::string id = m[1];
    const std::string action = m[3];

    if (action == "patient-message" && req.method == "POST") {
      ApiResponse err;
      const auto text = read_text(req, &err);
      if (!text) return err;
      return with_session(id, [&](ApiSession& s) {
        if (s.session.closed()) return error_response(409, "already_closed", "session is closed");
        try {
          return json_response(200, turn_result_to_json(s.session.step(*text)));
        } catch (const ValidationError& e) {
          return error_response(422, "validation_error", e.what());
        }
      });
    }
    if (action == "coach-message" && req.method == "POST") {
      ApiResponse err;
      const auto text = read_text(req, &err);
      if (!text) return err;
      return with_session(id, [&](ApiSession& s) {
        if (s.session.closed()) return error_response(409, "already_closed", "session is closed");
        try {
          s.session.coach_message(*text);
        } catch (const ValidationError& e) {
          return error_response(422, "validation_error", e.what());
        }
        return json_response(200, {{"ok", true}, {"turn_count", s.session.log().size()}});
      });
    }
    if (action == "goal" && req.method == "GET") {
      const auto q = req.query.find("point");
      const std::string point = q == req.query.end() ? "current" : q->second;
      if (point != "current" && point != "forward" && point != "backward") {
        return error_response(400, "bad_request", "point must be current, forward or backward");
      }
      return with_session(id, [&](ApiSession& s) {
        if (point == "current") {
          return json_response(200, {{"point", "current"},
                                     {"week_id", s.session.config().week_id},
                                     {"stage", stage_token(s.session.stage())},
                                     {"belief", belief_to_json(s.session.belief())}});
        }
        try {
          const GoalSnapshot snap = s.session.snapshot_goal(*parse_snapshot_point(point));
          return json_response(200, {{"point", point}, {"week_id", snap.week_id}, {"belief", belief_to_json(snap.belief)}});
        } catch (const PreconditionError& e) {
          return error_response(409, "snapshot_unavailable", e.what());
        }
      });
    }
    if (action == "close" && req.method == "POST") {
      return with_session(id, [&](ApiSession& s) {
        try {
          s.session.close();
        } catch (const AlreadyClosed& e) {
          return error_response(409, "already_closed", e.what());
        }
        return json_response(200, s.session.summary());
      });
    }
    if (action.empty() && req.method == "GET") {
      return with_session(id, [&](ApiSession& s) {
        Json summary = s.session.summary();
        summary["session_id"] = id;
        summary["created_at"] = iso_time(s.created_at);
        summary["backends"] = s.backend_name;
        return json_response(200, summary);
      });
    }
    if (action == "transcript" && req.method == "GET") {
      return with_session(id, [&](ApiSession& s) {
        std::ostringstream out;
        s.session.export_transcript(out);
        return ApiResponse{200, out.str(), "application/x-ndjson"};
      });
    }
    return error_response(404, "not_found", "no route for " + req.method + " " + req.path);
  } catch (const std::exception& e) {
    spdlog::error("request {} {} failed: {}", req.method, req.path, e.what());
    return error_response(500, "internal_error", e.what());
  }
}

namespace {

ApiRequest to_api(const httplib::Request& r) {
  ApiRequest a;
  a.method = r.method;
  a.path = r.path;
  for (const auto& [k, v] : r.params) a.query[k] = v;
  for (const auto& [k, v] : r.headers) a.headers[to_lower(k)] = v;
  a.body = r.body;
  return a;
}

}  // namespace

void CoachService::register_routes() {
  if (http_) return;
  http_ = std::make_unique<Http>();
  auto dispatch = [this](const httplib::Request& r, httplib::Response& res) {
    const ApiResponse out = handle(to_api(r));
    res.status = out.status;
    res.set_content(out.body, out.content_type.c_str());
  };
  const std::string any = ".*";
  http_->server.Get(any, dispatch);
  http_->server.Post(any, dispatch);
  http_->server.Put(any, dispatch);
  http_->server.Delete(any, dispatch);
}

bool CoachService::listen(const std::string& host, int port) {
  register_routes();
  return http_->server.listen(host, port);
}

int CoachService::start_background(const std::string& host) {
  register_routes();
  const int port = http_->server.bind_to_any_port(host);
  if (port <= 0) throw ConfigError("could not bind a port on " + host);
  http_->thread = std::thread([this] { http_->server.listen_after_bind(); });
  http_->server.wait_until_ready();
  return port;
}

void CoachService::stop() {
  if (!http_) return;
  http_->server.stop();
  if (http_->thread.joinable()) http_->thread.join();
}

}  // namespace goalcoach
