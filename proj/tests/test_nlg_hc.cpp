// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "goalcoach/backends/rule_backends.hpp"
#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"
#include "goalcoach/nlg/hc.hpp"
#include "support.hpp"

using namespace goalcoach;

namespace {

class EchoSeq final : public SeqBackend {
 public:
  explicit EchoSeq(std::string out) : out_(std::move(out)) {}
  const BackendSpec& spec() const override { return spec_; }
  std::string generate(const std::string&, const DecodeOptions&) const override {
    if (out_ == "!throw") throw std::runtime_error("offline");
    return out_;
  }

 private:
  BackendSpec spec_;
  std::string out_;
};

DialogueTurn coach(std::string text) { return {Speaker::kCoach, std::move(text), 0, std::nullopt}; }
DialogueTurn patient(std::string text) { return {Speaker::kPatient, std::move(text), 1, std::nullopt}; }

}  // namespace

TEST_CASE("assembled input layout") {
  SessionContext ctx;
  CHECK(assemble_stage_input(ctx).rendered == "predict stage: <|context|> <|belief|> <|stage|> goal_setting");

  ctx.window = {coach("What is your goal?"), patient("walk")};
  ctx.belief.add(Slot::kActivity, "walk");
  ctx.previous_stage = Stage::kGoalImplementation;
  CHECK(assemble_stage_input(ctx).rendered ==
        "predict stage: <|context|> <|coach|> What is your goal? <|patient|> walk <|belief|> activity=walk "
        "<|stage|> goal_implementation");
  CHECK(assemble_response_input(ctx, Stage::kGoalSetting).rendered ==
        "generate response: <|context|> <|coach|> What is your goal? <|patient|> walk <|belief|> activity=walk "
        "<|stage|> goal_setting");
}

TEST_CASE("assemble and split round trip (property)") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> noise = {"", " <|sep|> ", "<|belief|>", " | ", "[amount]", "<|stage|> x"};
  for (int i = 0; i < 1000; ++i) {
    SessionContext ctx;
    ctx.belief = testing::random_belief(rng, 0.3);
    ctx.previous_stage = std::bernoulli_distribution(0.5)(rng) ? Stage::kGoalSetting : Stage::kGoalImplementation;
    auto text = [&] {
      return testing::random_phrase(rng, 6) + noise[std::uniform_int_distribution<std::size_t>(0, noise.size() - 1)(rng)] +
             testing::random_phrase(rng, 2);
    };
    if (std::bernoulli_distribution(0.7)(rng)) ctx.window.push_back(coach(text()));
    ctx.window.push_back(patient(text()));

    const AssembledInput in = assemble_stage_input(ctx);
    const AssembledInput back = split_assembled(in.rendered);
    REQUIRE(back.task_prefix == in.task_prefix);
    REQUIRE(back.context_text == in.context_text);
    REQUIRE(back.belief_text == in.belief_text);
    REQUIRE(back.stage_token == in.stage_token);
    CHECK(parse_belief(back.belief_text) == ctx.belief);

    const auto window = parse_context(back.context_text);
    REQUIRE(window.size() == ctx.window.size());
    for (std::size_t k = 0; k < window.size(); ++k) {
      CHECK(window[k].speaker == ctx.window[k].speaker);
      CHECK(window[k].text == escape_special(trim(ctx.window[k].text)));
    }
  }
}

TEST_CASE("split_assembled rejects malformed input") {
  CHECK_THROWS_AS(split_assembled("predict stage: goal_setting"), ValidationError);
  CHECK_THROWS_AS(split_assembled("predict stage: <|context|> <|stage|> goal_setting"), ValidationError);
  CHECK_THROWS_AS(split_assembled("predict stage: <|context|> <|belief|>"), ValidationError);
}

TEST_CASE("stage prediction with the rule backend") {
  const RuleSeqBackend seq;
  SessionContext first;
  first.window = {patient("Hi coach")};
  CHECK(predict_stage(first, seq) == Stage::kGoalSetting);

  SessionContext done;
  done.belief = parse_belief("activity=walk; amount=3000 steps; dayname=Monday|Friday");
  done.window = {coach("Great, so your goal is to walk 3000 steps on Monday and Friday. Does that sound right?"),
                 patient("Yes.")};
  CHECK(predict_stage(done, seq) == Stage::kGoalImplementation);

  done.window.back().text = "No, make it Tuesday.";
  CHECK(predict_stage(done, seq) == Stage::kGoalSetting);

  SessionContext impl;
  impl.previous_stage = Stage::kGoalImplementation;
  impl.window = {patient("I walked today.")};
  CHECK(predict_stage(impl, seq) == Stage::kGoalImplementation);
  impl.window = {patient("I want to change my goal to swimming.")};
  CHECK(predict_stage(impl, seq) == Stage::kGoalSetting);
}

TEST_CASE("stage prediction keeps the previous stage on bad output") {
  SessionContext ctx;
  ctx.previous_stage = Stage::kGoalImplementation;
  Diagnostics diag;
  CHECK(predict_stage(ctx, EchoSeq("stage_x"), &diag) == Stage::kGoalImplementation);
  CHECK(diag.fallbacks.size() == 1);
  CHECK(predict_stage(ctx, EchoSeq("!throw"), &diag) == Stage::kGoalImplementation);
  CHECK(diag.fallbacks.size() == 2);
  CHECK(predict_stage(ctx, EchoSeq(" Goal_Setting \n")) == Stage::kGoalSetting);
}

TEST_CASE("rule templates") {
  const RuleSeqBackend seq;
  SessionContext ctx;
  ctx.window = {coach("What would you like your goal to be this week?"),
                patient("I want to walk 30 min a day between 6am to 8am.")};
  ctx.belief = parse_belief("activity=walk; duration=30 min; repeatation=a day; time=6am to 8am");
  const auto r = generate_response(ctx, Stage::kGoalSetting, seq);
  CHECK(r.text == "Sounds good, which days would you like to [activity]?");
  CHECK(lexicalize(r, ctx.belief).text == "Sounds good, which days would you like to walk?");

  BeliefState full;
  for (Slot s : kAllSlots) full.add(s, s == Slot::kScore ? "8" : "x");
  const auto confirm = generate_response({{}, Stage::kGoalSetting, full}, Stage::kGoalSetting, seq);
  CHECK(confirm.text.find("so your goal is") != std::string::npos);
  CHECK(RuleSeqBackend::summarizes_goal(confirm.text));

  // Every template names the activity, so an unfilled activity is visible.
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const BeliefState b = testing::random_belief(rng, 0.4);
    for (Stage st : {Stage::kGoalSetting, Stage::kGoalImplementation}) {
      const auto out = generate_response({{}, st, b}, st, seq);
      CHECK(invalid_placeholders(out.text).empty());
      const auto ph = out.placeholders();
      CHECK(std::find(ph.begin(), ph.end(), Slot::kActivity) != ph.end());
      for (Slot s : ph) CHECK((b.filled(s) || s == Slot::kActivity));
    }
  }
}

TEST_CASE("generate_response cleans and falls back") {
  Diagnostics diag;
  CHECK(generate_response({}, Stage::kGoalSetting, EchoSeq("Nice [foo] work [amount] !"), {}, &diag).text ==
        "Nice work [amount]!");
  CHECK(diag.fallbacks.size() == 1);
  CHECK(generate_response({}, Stage::kGoalSetting, EchoSeq("")).text == kFallbackResponse);
  CHECK(generate_response({}, Stage::kGoalSetting, EchoSeq("!throw")).text == kFallbackResponse);
  CHECK(invalid_placeholders("[amount] [steps] [x_y]") == std::vector<std::string>{"steps", "x_y"});
}

TEST_CASE("lexicalization") {
  const BeliefState b = parse_belief("amount=3000 steps; dayname=Mon|Tue");
  CHECK(lexicalize({"Great, [amount] it is!"}, b).text == "Great, 3000 steps it is!");
  CHECK(lexicalize({"No placeholders here."}, b).text == "No placeholders here.");
  CHECK(lexicalize({"[dayname]"}, b).text == "Mon and Tue");
  const auto l = lexicalize({"Will you [activity] on [dayname]?"}, b);
  CHECK(l.text == "Will you your goal on Mon and Tue?");
  CHECK(l.unfilled == std::vector<Slot>{Slot::kActivity});
  CHECK(join_values({"a", "b", "c"}) == "a, b and c");
  CHECK(join_values({}).empty());
}
