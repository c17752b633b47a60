// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Session-oriented HTTP API over the orchestrator. Routes (JSON bodies,
// schema in api/openapi.json):
//   POST /sessions                          201 {session_id, config, created_at}
//   POST /sessions/{id}/patient-message     200 TurnResult
//   POST /sessions/{id}/coach-message       200 {ok, turn_count}
//   GET  /sessions/{id}/goal?point=...      200 {point, week_id, belief}
//   POST /sessions/{id}/close               200 session summary
//   GET  /sessions/{id}                     200 session summary
//   GET  /sessions/{id}/transcript          200 JSONL transcript
//   GET  /health                            200 {status, backends}
// Errors: {"error": {"status", "type", "message"}}.

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "goalcoach/backends/registry.hpp"
#include "goalcoach/orchestrator/session.hpp"

namespace goalcoach {

struct ApiRequest {
  std::string method;
  std::string path;  // without query string
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";

  Json json() const { return Json::parse(body); }
};

struct ServiceOptions {
  /// Backend sets selectable per session by name; "default" is required.
  std::map<std::string, BackendSet> backends;
  SessionConfig defaults;
  /// When set, every request must carry "Authorization: Bearer <token>"
  /// (or "X-Goalcoach-Token: <token>").
  std::optional<std::string> token;
};

class CoachService {
 public:
  explicit CoachService(ServiceOptions options);
  ~CoachService();

  /// Routes one request. Thread-safe; requests for one session are serialized.
  ApiResponse handle(const ApiRequest& req);

  /// Blocks serving HTTP until stop() is called. Returns false if the socket
  /// could not be bound.
  bool listen(const std::string& host, int port);
  /// Binds to an ephemeral port and serves on a background thread; returns the port.
  int start_background(const std::string& host = "127.0.0.1");
  void stop();

  std::size_t session_count() const;

 private:
  struct ApiSession {
    std::mutex mutex;
    Session session;
    std::chrono::system_clock::time_point created_at;
    std::string backend_name;
    ApiSession(BackendSet b, SessionConfig c, std::string name)
        : session(std::move(b), std::move(c)), created_at(std::chrono::system_clock::now()), backend_name(std::move(name)) {}
  };

  ApiResponse create_session(const ApiRequest& req);
  ApiResponse with_session(const std::string& id, const std::function<ApiResponse(ApiSession&)>& fn);
  std::string new_session_id();
  void register_routes();

  ServiceOptions options_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<ApiSession>> sessions_;
  std::uint64_t counter_ = 0;
  std::uint64_t id_salt_ = 0;
  struct Http;
  std::unique_ptr<Http> http_;
};

}  // namespace goalcoach
