// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <chrono>
#include <sstream>

#include "goalcoach/backends/rule_backends.hpp"
#include "goalcoach/core/errors.hpp"
#include "goalcoach/corpus/toy.hpp"
#include "goalcoach/nlu/nlu.hpp"
#include "goalcoach/orchestrator/session.hpp"
#include "support.hpp"

using namespace goalcoach;

namespace {

const std::string kMigraine = "I'm sorry I didn't go to work today I have a massive migraine headache.";

const std::vector<std::string> kGoalSetting = {
    "I want to walk 3000 steps on Monday and Friday.",
    "In the morning.",
    "8",
    "Yes.",
};

void drive_to_implementation(Session& s) {
  for (const auto& u : kGoalSetting) s.step(u);
  REQUIRE(s.stage() == Stage::kGoalImplementation);
}

std::string transcript(const Session& s) {
  std::ostringstream out;
  s.export_transcript(out);
  return out.str();
}

std::string run_script(const std::vector<std::string>& script, const std::string& week) {
  SessionConfig cfg;
  cfg.week_id = week;
  Session s(rule_backends(), cfg);
  for (const auto& u : script) s.step(u);
  s.close();
  return transcript(s);
}

}  // namespace

TEST_CASE("session config validation and json") {
  SessionConfig c;
  CHECK_NOTHROW(c.validate());
  const SessionConfig back = SessionConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  const auto tau = SessionConfig::from_json(Json{{"tau", 0.5}});
  CHECK(tau.gate.tau == 0.5);
  CHECK(tau.week_id == c.week_id);
  CHECK_THROWS_AS(SessionConfig::from_json(Json{{"tau", 1.5}}), ConfigError);
  CHECK_THROWS_AS(SessionConfig::from_json(Json{{"gate", {{"tau", 0.5}}}}), ConfigError);
  CHECK_THROWS_AS(SessionConfig::from_json(Json{{"top_n", "two"}}), ConfigError);
  CHECK_THROWS_AS(SessionConfig::from_json(Json::array()), ConfigError);
  CHECK_THROWS_AS(Session(BackendSet{}, SessionConfig{}), ConfigError);
}

TEST_CASE("goal-setting turn with a new goal statement") {
  Session s(rule_backends(), SessionConfig{});
  s.coach_message("What would you like your goal to be this week?");
  const TurnResult r = s.step("I want to walk 30 min a day between 6am to 8am.");
  CHECK_FALSE(r.gate_fired);
  CHECK(r.empathetic_variants.empty());
  CHECK(r.stage == Stage::kGoalSetting);
  CHECK(r.belief == parse_belief("activity=walk; duration=30 min; time=6am to 8am; repeatation=a day"));
  CHECK(r.delexicalized_response == "Sounds good, which days would you like to [activity]?");
  CHECK(r.coach_response == "Sounds good, which days would you like to walk?");
}

TEST_CASE("empathetic turn on a migraine message") {
  Session s(rule_backends(), SessionConfig{});
  drive_to_implementation(s);
  const TurnResult r = s.step(kMigraine);
  CHECK(r.gate_fired);
  CHECK(r.stage == Stage::kGoalImplementation);
  REQUIRE(r.empathetic_variants.size() == 3);
  CHECK(r.empathetic_variants.at(Mechanism::kEmotionalReaction) == "Oh no, I hope you are okay.");
  const auto& explor = r.empathetic_variants.at(Mechanism::kExploration);
  CHECK(explor.find("Are you feeling better?") != std::string::npos);
  CHECK(r.coach_response == "Oh no, I hope you are okay. " + r.goal_response);
}

TEST_CASE("neutral acknowledgement does not open the gate") {
  Session s(rule_backends(), SessionConfig{});
  CHECK_FALSE(s.step("Ok.").gate_fired);
}

TEST_CASE("prepend_empathy off keeps the goal reply") {
  SessionConfig cfg;
  cfg.prepend_empathy = false;
  cfg.mechanisms = {Mechanism::kExploration};
  Session s(rule_backends(), cfg);
  const auto r = s.step(kMigraine);
  CHECK(r.gate_fired);
  CHECK(r.empathetic_variants.size() == 1);
  CHECK(r.coach_response == r.goal_response);
}

TEST_CASE("step input validation and closing") {
  Session s(rule_backends(), SessionConfig{});
  CHECK_THROWS_AS(s.step(""), ValidationError);
  CHECK_THROWS_AS(s.step("  \t"), ValidationError);
  CHECK(s.results().empty());
  CHECK(s.log().empty());
  CHECK_THROWS_AS(s.snapshot_goal(SnapshotPoint::kForward), PreconditionError);
  CHECK_THROWS_AS(s.snapshot_goal(SnapshotPoint::kBackward), PreconditionError);
  s.step("I want to swim.");
  const GoalSnapshot back = s.close();
  CHECK(back.belief == s.belief());
  CHECK(back.point == SnapshotPoint::kBackward);
  CHECK(s.snapshot_goal(SnapshotPoint::kBackward).belief == back.belief);
  CHECK_THROWS_AS(s.close(), AlreadyClosed);
  CHECK_THROWS_AS(s.step("hi"), AlreadyClosed);
  CHECK_THROWS_AS(s.coach_message("hi"), AlreadyClosed);
}

TEST_CASE("forward snapshot is the belief at the transition turn") {
  Session s(rule_backends(), SessionConfig{});
  BeliefState at_transition;
  for (const auto& u : kGoalSetting) {
    const auto r = s.step(u);
    if (r.stage == Stage::kGoalImplementation) at_transition = r.belief;
  }
  REQUIRE(s.stage() == Stage::kGoalImplementation);
  CHECK(s.snapshot_goal(SnapshotPoint::kForward).belief == at_transition);
  s.step("I walked 4000 steps on Monday.");
  CHECK(s.snapshot_goal(SnapshotPoint::kForward).belief == at_transition);
}

TEST_CASE("coach override replaces the pending suggestion") {
  Session s(rule_backends(), SessionConfig{});
  s.step("I want to walk.");
  REQUIRE(s.pending_reply());
  s.coach_message("Which days work for you?");
  CHECK_FALSE(s.pending_reply());
  REQUIRE(s.log().size() == 2);
  CHECK(s.log().back().text == "Which days work for you?");
  CHECK(s.log().back().speaker == Speaker::kCoach);
  s.step("Monday.");
  CHECK(s.log().size() == 3);
  CHECK_THROWS_AS(s.coach_message(" "), ValidationError);
}

TEST_CASE("replay determinism over 20 scripted sessions") {
  const auto start = std::chrono::steady_clock::now();
  const Corpus toy = generate_toy_corpus(ToyConfig{20, 99});
  const BackendSet backends = rule_backends();
  for (const auto& week : toy.weeks) {
    const auto script = patient_script(week);
    const std::string first = run_script(script, week.week_id);
    for (int k = 1; k < 5; ++k) CHECK(run_script(script, week.week_id) == first);

    std::istringstream in(first);
    const auto sessions = read_transcript(in);
    REQUIRE(sessions.size() == 1);
    const auto replayed = replay_session(sessions[0], backends);
    std::string joined;
    for (const auto& j : replayed) joined += j.dump() + "\n";
    CHECK(joined == first);

    // online/offline consistency
    Session s(backends, sessions[0].config);
    for (const auto& u : script) s.step(u);
    const GoalSnapshot back = s.close();
    CHECK(back.belief == fold_transcript(s.log(), *backends.tagger, *backends.carryover));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 30.0);
}

TEST_CASE("transcript reader reports bad lines") {
  std::istringstream bad("{\"event\": \"patient_message\", \"text\": \"hi\"}\n");
  CHECK_THROWS_AS(read_transcript(bad), SchemaError);
  std::istringstream junk("{\"event\": \"open\", \"config\": {}}\nnot json\n");
  try {
    read_transcript(junk);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("turn result json carries the pipeline outputs") {
  Session s(rule_backends(), SessionConfig{});
  const auto j = turn_result_to_json(s.step(kMigraine));
  CHECK(j.at("gate_fired").get<bool>());
  CHECK(j.contains("emotion"));
  CHECK(j.contains("coach_response"));
  CHECK(j.contains("empathetic_variants"));
}
