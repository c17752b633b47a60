// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "goalcoach/backends/rule_backends.hpp"
#include "goalcoach/core/errors.hpp"
#include "goalcoach/nlu/bio.hpp"
#include "goalcoach/nlu/nlu.hpp"
#include "support.hpp"

using namespace goalcoach;

namespace {

class FixedCarryover final : public CarryoverBackend {
 public:
  explicit FixedCarryover(bool keep) : keep_(keep) { spec_.kind = BackendKind::kCarryover; }
  const BackendSpec& spec() const override { return spec_; }
  CarryoverDecision decide(const CarryoverQuery& q) const override {
    ++calls;
    return {q.slot, keep_, 1.0};
  }
  mutable int calls = 0;

 private:
  BackendSpec spec_;
  bool keep_;
};

class ThrowingCarryover final : public CarryoverBackend {
 public:
  const BackendSpec& spec() const override { return spec_; }
  CarryoverDecision decide(const CarryoverQuery&) const override { throw std::runtime_error("down"); }

 private:
  BackendSpec spec_;
};

class ShortTagger final : public SlotTaggerBackend {
 public:
  const BackendSpec& spec() const override { return spec_; }
  std::vector<std::string> tag(const std::vector<std::string>&) const override { return {"O"}; }

 private:
  BackendSpec spec_;
};

SlotSpan span(Slot s, std::string v) { return SlotSpan{s, std::move(v), 0, 0}; }

std::vector<std::pair<Slot, std::string>> pairs(const std::vector<SlotSpan>& spans) {
  std::vector<std::pair<Slot, std::string>> out;
  for (const auto& s : spans) out.emplace_back(s.slot, s.value);
  return out;
}

}  // namespace

TEST_CASE("bio label inventory") {
  const auto& labels = bio_labels();
  REQUIRE(labels.size() == 21);
  CHECK(labels[0] == "O");
  CHECK(labels[1] == "B-activity");
  CHECK(labels[2] == "I-activity");
  CHECK(labels[20] == "I-score");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    CHECK(bio_label_id(labels[i]) == static_cast<int>(i));
    CHECK(format_bio_label(parse_bio_label(labels[i])) == labels[i]);
  }
  CHECK_THROWS_AS(parse_bio_label("B-steps"), ValidationError);
}

TEST_CASE("bio validation and repair") {
  CHECK(is_valid_bio({"B-activity", "I-activity", "O"}));
  CHECK_FALSE(is_valid_bio({"I-activity"}));
  CHECK_FALSE(is_valid_bio({"O", "I-activity"}));
  CHECK_FALSE(is_valid_bio({"B-amount", "I-activity"}));
  CHECK(repair_bio({"I-activity", "O", "I-time", "I-time"}) ==
        std::vector<std::string>{"B-activity", "O", "B-time", "I-time"});
  CHECK_THROWS_AS(repair_bio({"X"}), ValidationError);
  BIOSequence seq{{"a", "b"}, {"O"}};
  CHECK_THROWS_AS(seq.validate(), ValidationError);
}

TEST_CASE("span encoding round trips through decoding (property)") {
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 1000; ++iter) {
    const int n = std::uniform_int_distribution<int>(1, 15)(rng);
    std::vector<Token> tokens;
    std::string text;
    for (int i = 0; i < n; ++i) {
      if (i) text += ' ';
      const std::string w = "w" + std::to_string(i);
      tokens.push_back({w, text.size(), text.size() + w.size()});
      text += w;
    }
    std::vector<SlotSpan> spans;
    int pos = 0;
    while (pos < n) {
      if (std::bernoulli_distribution(0.4)(rng)) {
        const int len = std::uniform_int_distribution<int>(1, std::min(3, n - pos))(rng);
        const Slot s = kAllSlots[std::uniform_int_distribution<std::size_t>(0, kSlotCount - 1)(rng)];
        std::string v;
        for (int k = pos; k < pos + len; ++k) v += (k > pos ? " " : "") + tokens[k].text;
        spans.push_back({s, v, pos, pos + len - 1});
        pos += len;
      } else {
        ++pos;
      }
    }
    const auto labels = encode_spans(tokens.size(), spans);
    REQUIRE(is_valid_bio(labels));
    CHECK(decode_bio(tokens, labels) == spans);
    CHECK(decode_bio(tokens, labels, text) == spans);
  }
}

TEST_CASE("span encoding rejects bad spans") {
  CHECK_THROWS_AS(encode_spans(3, {{Slot::kActivity, "", 1, 0}}), ValidationError);
  CHECK_THROWS_AS(encode_spans(3, {{Slot::kActivity, "", 2, 3}}), ValidationError);
  CHECK_THROWS_AS(encode_spans(3, {{Slot::kActivity, "", 0, 1}, {Slot::kAmount, "", 1, 2}}), ValidationError);
}

TEST_CASE("rule tagger on the schema examples") {
  const RuleSlotTagger tagger;
  CHECK(pairs(extract_slots("I want to walk 30 min a day between 6am to 8am", tagger)) ==
        std::vector<std::pair<Slot, std::string>>{{Slot::kActivity, "walk"},
                                                  {Slot::kDuration, "30 min"},
                                                  {Slot::kRepeatation, "a day"},
                                                  {Slot::kTime, "6am to 8am"}});
  CHECK(extract_slots("Good morning!", tagger).empty());
  CHECK(pairs(extract_slots("walk 2 miles around the park", tagger)) ==
        std::vector<std::pair<Slot, std::string>>{{Slot::kActivity, "walk"},
                                                  {Slot::kDistance, "2 miles"},
                                                  {Slot::kLocation, "around the park"}});
  CHECK(pairs(extract_slots("I will jog 3000 steps on Monday and Wednesday", tagger)) ==
        std::vector<std::pair<Slot, std::string>>{{Slot::kActivity, "jog"},
                                                  {Slot::kAmount, "3000 steps"},
                                                  {Slot::kDayname, "Monday"},
                                                  {Slot::kDayname, "Wednesday"}});
}

TEST_CASE("extract_slots error handling") {
  const RuleSlotTagger tagger;
  CHECK_THROWS_AS(extract_slots("   ", tagger), ValidationError);
  CHECK_THROWS_AS(extract_slots("walk every day", ShortTagger{}), BackendFailure);
}

TEST_CASE("collision detection") {
  BeliefState prev;
  CHECK(detect_collisions(prev, {span(Slot::kActivity, "walk")}).empty());
  prev.add(Slot::kActivity, "walk");
  CHECK(detect_collisions(prev, {span(Slot::kActivity, "jogging")}) == std::vector<Slot>{Slot::kActivity});
  CHECK(detect_collisions(prev, {span(Slot::kActivity, "Walk")}).empty());
}

TEST_CASE("update_belief worked cases") {
  const FixedCarryover replace(false);
  const FixedCarryover keep(true);
  const SessionContext ctx;

  BeliefState empty;
  empty.set_turn_index(4);
  const BeliefState same = update_belief(empty, {}, replace, ctx);
  CHECK(same == empty);
  CHECK(same.turn_index() == 5);

  BeliefState prev;
  prev.add(Slot::kAmount, "2000 steps");
  CHECK(update_belief(prev, {span(Slot::kAmount, "3000 steps")}, replace, ctx) ==
        parse_belief("amount=3000 steps"));
  CHECK(update_belief(prev, {span(Slot::kAmount, "3000 steps")}, keep, ctx) == prev);

  BeliefState walk;
  walk.add(Slot::kActivity, "walk");
  CHECK(update_belief(walk, {span(Slot::kDayname, "Monday")}, replace, ctx) ==
        parse_belief("activity=walk; dayname=Monday"));

  // Restating a recorded value never consults the backend.
  FixedCarryover counting(true);
  update_belief(walk, {span(Slot::kActivity, "WALK")}, counting, ctx);
  CHECK(counting.calls == 0);
  update_belief(walk, {span(Slot::kActivity, "run")}, counting, ctx);
  CHECK(counting.calls == 1);
}

TEST_CASE("update_belief falls back to replace when carryover throws") {
  BeliefState prev = parse_belief("activity=walk");
  Diagnostics diag;
  const auto next = update_belief(prev, {span(Slot::kActivity, "swim")}, ThrowingCarryover{}, {}, &diag);
  CHECK(next == parse_belief("activity=swim"));
  CHECK(diag.collisions == std::vector<Slot>{Slot::kActivity});
  CHECK_FALSE(diag.fallbacks.empty());
}

TEST_CASE("update_belief drops unstorable values") {
  Diagnostics diag;
  const auto next = update_belief({}, {span(Slot::kScore, "42"), span(Slot::kActivity, "hike")}, FixedCarryover(false), {}, &diag);
  CHECK(next == parse_belief("activity=hike"));
  CHECK(diag.fallbacks.size() == 1);
}

TEST_CASE("rule_update is last mention wins") {
  CHECK(rule_update(parse_belief("activity=walk"), {span(Slot::kActivity, "jog")}) == parse_belief("activity=jog"));
  CHECK(rule_update({}, {}).empty());
  BeliefState b;
  b = rule_update(b, {span(Slot::kAmount, "2000")});
  b = rule_update(b, {span(Slot::kAmount, "3000")});
  CHECK(b == parse_belief("amount=3000"));
}

TEST_CASE("always-replace carryover matches rule_update on single-valued scripts (500 scripts)") {
  const FixedCarryover replace(false);
  std::mt19937_64 rng(500);
  const std::vector<std::string> pool = {"walk", "jog", "2000 steps", "3000 steps", "Monday", "7am", "park", "3", "8"};
  for (int script = 0; script < 500; ++script) {
    BeliefState a;
    BeliefState b;
    const int turns = std::uniform_int_distribution<int>(1, 12)(rng);
    for (int t = 0; t < turns; ++t) {
      std::vector<SlotSpan> spans;
      for (Slot s : kAllSlots) {
        if (!std::bernoulli_distribution(0.3)(rng)) continue;
        std::string v = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
        if (s == Slot::kScore) v = std::to_string(std::uniform_int_distribution<int>(1, 10)(rng));
        spans.push_back(span(s, v));
      }
      std::shuffle(spans.begin(), spans.end(), rng);
      SessionContext ctx{{}, Stage::kGoalSetting, a};
      a = update_belief(a, spans, replace, ctx);
      b = rule_update(b, spans);
      REQUIRE(a == b);
      REQUIRE(a.turn_index() == b.turn_index());
    }
  }
}

TEST_CASE("context window pairs the last coach turn with the incoming message") {
  const DialogueTurn coach{Speaker::kCoach, "Which days?", 0, std::nullopt};
  const DialogueTurn patient{Speaker::kPatient, "Monday", 1, std::nullopt};
  CHECK(context_window({}, patient).size() == 1);
  const auto w = context_window({coach}, patient);
  REQUIRE(w.size() == 2);
  CHECK(w[0] == coach);
  CHECK(w[1] == patient);
  CHECK(context_window({patient}, patient).size() == 1);
}

TEST_CASE("fold_transcript replays the belief updates") {
  const RuleSlotTagger tagger;
  const RuleCarryover carry;
  std::vector<DialogueTurn> log = {
      {Speaker::kCoach, "What would you like your goal to be this week?", 0, Stage::kGoalSetting},
      {Speaker::kPatient, "I want to walk 3000 steps", 1, Stage::kGoalSetting},
      {Speaker::kCoach, "Which days would you like to walk?", 2, Stage::kGoalSetting},
      {Speaker::kPatient, "Monday and Friday", 3, Stage::kGoalSetting},
  };
  CHECK(fold_transcript(log, tagger, carry) ==
        parse_belief("activity=walk; amount=3000 steps; dayname=Monday|Friday"));
}
