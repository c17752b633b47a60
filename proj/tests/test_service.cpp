// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <httplib.h>

#include <sstream>
#include <thread>

#include "goalcoach/backends/rule_backends.hpp"
#include "goalcoach/core/errors.hpp"
#include "goalcoach/orchestrator/session.hpp"
#include "goalcoach/service/server.hpp"

using namespace goalcoach;

namespace {

ServiceOptions default_options() {
  ServiceOptions o;
  o.backends["default"] = rule_backends();
  return o;
}

ApiRequest post(std::string path, std::string body) { return {"POST", std::move(path), {}, {}, std::move(body)}; }
ApiRequest get(std::string path, std::map<std::string, std::string> query = {}) {
  return {"GET", std::move(path), std::move(query), {}, ""};
}

std::string text_body(const std::string& text) { return Json{{"text", text}}.dump(); }

std::string open_session(CoachService& svc, const std::string& config = "{}") {
  const auto r = svc.handle(post("/sessions", config));
  REQUIRE(r.status == 201);
  return r.json().at("session_id").get<std::string>();
}

std::string error_type(const ApiResponse& r) { return r.json().at("error").at("type").get<std::string>(); }

const std::vector<std::string> kScript = {
    "I want to walk 3000 steps on Monday and Friday.",
    "I'm sorry I didn't go to work today I have a massive migraine headache.",
    "In the morning.",
    "8",
    "Yes.",
};

}  // namespace

TEST_CASE("service needs a default backend set") {
  ServiceOptions o;
  CHECK_THROWS_AS(CoachService{o}, ConfigError);
}

TEST_CASE("health and session creation") {
  CoachService svc(default_options());
  const auto h = svc.handle(get("/health"));
  CHECK(h.status == 200);
  CHECK(h.json().at("status") == "ok");
  CHECK(h.json().at("backends").contains("default"));

  const auto r = svc.handle(post("/sessions", R"({"tau": 0.5, "week_id": "w1"})"));
  CHECK(r.status == 201);
  const Json j = r.json();
  CHECK(j.at("config").at("tau") == 0.5);
  CHECK(j.at("config").at("week_id") == "w1");
  CHECK(j.at("session_id").get<std::string>().rfind("s_", 0) == 0);
  CHECK(svc.session_count() == 1);
  CHECK(open_session(svc) != j.at("session_id").get<std::string>());

  CHECK(svc.handle(post("/sessions", R"({"tau": 1.5})")).status == 400);
  CHECK(error_type(svc.handle(post("/sessions", R"({"gate": {"tau": 0.5}})"))) == "config_error");
  CHECK(svc.handle(post("/sessions", R"({"backends": "large"})")).status == 400);
  CHECK(svc.handle(post("/sessions", "{not json")).status == 400);
  CHECK(svc.handle(post("/sessions", "[1]")).status == 400);
}

TEST_CASE("patient turns through the API") {
  CoachService svc(default_options());
  const std::string id = open_session(svc);
  const std::string base = "/sessions/" + id;

  auto r = svc.handle(post(base + "/patient-message", text_body("Ok.")));
  REQUIRE(r.status == 200);
  CHECK(r.json().at("gate_fired") == false);
  CHECK(r.json().at("empathetic_variants").empty());
  CHECK_FALSE(r.json().at("coach_response").get<std::string>().empty());

  r = svc.handle(post(base + "/patient-message", text_body(kScript[1])));
  REQUIRE(r.status == 200);
  CHECK(r.json().at("gate_fired") == true);
  CHECK(r.json().at("empathetic_variants").size() == 3);

  CHECK(svc.handle(post(base + "/patient-message", text_body("   "))).status == 422);
  CHECK(svc.handle(post(base + "/patient-message", R"({"message": "hi"})")).status == 422);
  CHECK(svc.handle(post(base + "/patient-message", "nope")).status == 400);

  r = svc.handle(post(base + "/coach-message", text_body("Sounds good.")));
  CHECK(r.status == 200);
  CHECK(r.json().at("ok") == true);

  r = svc.handle(get(base + "/goal"));
  CHECK(r.status == 200);
  CHECK(r.json().at("point") == "current");
  CHECK(svc.handle(get(base + "/goal", {{"point", "forward"}})).status == 409);
  CHECK(svc.handle(get(base + "/goal", {{"point", "sideways"}})).status == 400);

  r = svc.handle(get(base));
  CHECK(r.status == 200);
  CHECK(r.json().at("session_id") == id);

  r = svc.handle(get(base + "/transcript"));
  CHECK(r.status == 200);
  CHECK(r.content_type == "application/x-ndjson");
  std::istringstream lines(r.body);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    CHECK(Json::accept(line));
    ++n;
  }
  CHECK(n >= 3);

  CHECK(svc.handle(post(base + "/close", "")).status == 200);
  CHECK(svc.handle(post(base + "/close", "")).status == 409);
  CHECK(svc.handle(post(base + "/patient-message", text_body("Hi"))).status == 409);
  CHECK(svc.handle(post(base + "/coach-message", text_body("Hi"))).status == 409);
}

TEST_CASE("unknown routes and sessions") {
  CoachService svc(default_options());
  CHECK(svc.handle(get("/sessions/s_missing")).status == 404);
  CHECK(svc.handle(post("/sessions/s_missing/patient-message", text_body("Hi"))).status == 404);
  CHECK(svc.handle(get("/nowhere")).status == 404);
  const std::string id = open_session(svc);
  CHECK(svc.handle(get("/sessions/" + id + "/patient-message")).status == 404);
  CHECK(svc.handle({"DELETE", "/sessions/" + id, {}, {}, ""}).status == 404);
}

TEST_CASE("bearer token") {
  ServiceOptions o = default_options();
  o.token = "secret";
  CoachService svc(o);
  CHECK(svc.handle(get("/health")).status == 401);
  ApiRequest r = get("/health");
  r.headers["authorization"] = "Bearer wrong";
  CHECK(svc.handle(r).status == 401);
  r.headers["authorization"] = "Bearer secret";
  CHECK(svc.handle(r).status == 200);
  ApiRequest alt = get("/health");
  alt.headers["x-goalcoach-token"] = "secret";
  CHECK(svc.handle(alt).status == 200);
}

TEST_CASE("API turns equal a direct session") {
  CoachService svc(default_options());
  const std::string id = open_session(svc, R"({"seed": 11})");
  SessionConfig cfg;
  cfg.seed = 11;
  Session direct(rule_backends(), cfg);
  for (const auto& text : kScript) {
    CAPTURE(text);
    const auto r = svc.handle(post("/sessions/" + id + "/patient-message", text_body(text)));
    REQUIRE(r.status == 200);
    CHECK(r.json() == turn_result_to_json(direct.step(text)));
  }
  const auto g = svc.handle(get("/sessions/" + id + "/goal"));
  CHECK(g.json().at("belief") == belief_to_json(direct.belief()));
}

TEST_CASE("concurrent sessions") {
  CoachService svc(default_options());
  std::vector<std::string> ids;
  for (int i = 0; i < 8; ++i) ids.push_back(open_session(svc));
  std::vector<Json> last(ids.size());
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    threads.emplace_back([&, i] {
      for (const auto& text : kScript) {
        last[i] = svc.handle(post("/sessions/" + ids[i] + "/patient-message", text_body(text))).json();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& j : last) CHECK(j.at("coach_response") == last[0].at("coach_response"));
}

TEST_CASE("HTTP round trip") {
  CoachService svc(default_options());
  const int port = svc.start_background();
  REQUIRE(port > 0);
  httplib::Client cli("127.0.0.1", port);
  cli.set_connection_timeout(5);

  auto h = cli.Get("/health");
  REQUIRE(h);
  CHECK(h->status == 200);

  auto s = cli.Post("/sessions", R"({"tau": 0.7})", "application/json");
  REQUIRE(s);
  REQUIRE(s->status == 201);
  const std::string id = Json::parse(s->body).at("session_id").get<std::string>();

  auto t = cli.Post("/sessions/" + id + "/patient-message", text_body(kScript[0]), "application/json");
  REQUIRE(t);
  CHECK(t->status == 200);
  CHECK(Json::parse(t->body).at("belief").at("slots").at("activity") == Json::array({"walk"}));

  auto g = cli.Get("/sessions/" + id + "/goal?point=backward");
  REQUIRE(g);
  CHECK(g->status == 409);
  CHECK(Json::parse(g->body).at("error").at("status") == 409);

  auto missing = cli.Get("/sessions/s_nothing");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  svc.stop();
}
