// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "goalcoach/core/belief_state.hpp"
#include "goalcoach/core/dialogue.hpp"
#include "goalcoach/core/emotion.hpp"
#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/json_io.hpp"
#include "goalcoach/core/text.hpp"
#include "support.hpp"

using namespace goalcoach;

TEST_CASE("slot names round trip in enumeration order") {
  CHECK(kAllSlots.size() == kSlotCount);
  for (std::size_t i = 0; i < kSlotCount; ++i) {
    CHECK(slot_index(kAllSlots[i]) == i);
    CHECK(parse_slot(slot_name(kAllSlots[i])) == kAllSlots[i]);
  }
  CHECK(slot_name(Slot::kRepeatation) == "repeatation");
  CHECK_FALSE(parse_slot("steps"));
}

TEST_CASE("belief serialization") {
  BeliefState b;
  CHECK(serialize_belief(b).empty());
  b.add(Slot::kAmount, "3000 steps");
  b.add(Slot::kActivity, "walk");
  CHECK(serialize_belief(b) == "activity=walk; amount=3000 steps");

  BeliefState days;
  days.add(Slot::kDayname, "Monday");
  days.add(Slot::kDayname, "Tuesday");
  CHECK(serialize_belief(days) == "dayname=Monday|Tuesday");

  CHECK(parse_belief("").empty());
  CHECK(parse_belief("activity=walk; amount=3000 steps") == b);
  CHECK_THROWS_AS(parse_belief("steps=100"), MalformedBelief);
  CHECK_THROWS_AS(parse_belief("activity"), MalformedBelief);
  CHECK_THROWS_AS(parse_belief("activity="), MalformedBelief);
  CHECK_THROWS_AS(parse_belief("activity=walk; activity=run"), MalformedBelief);
}

TEST_CASE("belief values are deduplicated under normalization") {
  BeliefState b;
  CHECK(b.add(Slot::kActivity, "walk"));
  CHECK_FALSE(b.add(Slot::kActivity, "  Walk "));
  CHECK(b.values(Slot::kActivity).size() == 1);
  CHECK(b.has_value(Slot::kActivity, "WALK"));
  CHECK(b.filled_count() == 1);
}

TEST_CASE("belief rejects values that break the textual form") {
  BeliefState b;
  CHECK_THROWS_AS(b.add(Slot::kActivity, ""), MalformedBelief);
  CHECK_THROWS_AS(b.add(Slot::kActivity, "a;b"), MalformedBelief);
  CHECK_THROWS_AS(b.add(Slot::kActivity, "a|b"), MalformedBelief);
  CHECK_THROWS_AS(b.add(Slot::kActivity, "a=b"), MalformedBelief);
  CHECK_THROWS_AS(b.add(Slot::kActivity, "a\nb"), MalformedBelief);
  CHECK_THROWS_AS(b.add(Slot::kScore, "11"), MalformedBelief);
  CHECK_THROWS_AS(b.add(Slot::kScore, "0"), MalformedBelief);
  CHECK_NOTHROW(b.add(Slot::kScore, "7"));
  CHECK(sanitize_value("a;b|c=d\ne") == "a b c d e");
}

TEST_CASE("belief text and json round trip (property)") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    const BeliefState b = testing::random_belief(rng);
    const std::string text = serialize_belief(b);
    const BeliefState back = parse_belief(text);
    REQUIRE(back == b);
    CHECK(serialize_belief(back) == text);
    CHECK(belief_from_json(belief_to_json(b)) == b);
  }
}

TEST_CASE("tokenizer keeps inner punctuation") {
  CHECK(tokenize_words("I didn't walk Mon-Fri at 4:30, 2.5 miles!") ==
        std::vector<std::string>{"I", "didn't", "walk", "Mon-Fri", "at", "4:30", ",", "2.5", "miles", "!"});
  CHECK(tokenize_words("3,000 steps") == std::vector<std::string>{"3,000", "steps"});
  const auto toks = tokenize("  walk  far ");
  REQUIRE(toks.size() == 2);
  CHECK(toks[0].begin == 2);
  CHECK(toks[0].end == 6);
  CHECK(toks[1].begin == 8);
  CHECK(tokenize("").empty());
}

TEST_CASE("lm tokenizer round trip on plain sentences") {
  const std::string s = "Great, [amount] it is! Does that sound right?";
  const auto toks = lm_tokenize(s);
  CHECK(toks[1] == ",");
  CHECK(toks[2] == "[amount]");
  CHECK(lm_detokenize(toks) == s);
}

TEST_CASE("text helpers") {
  CHECK(normalize_value("  Three   Thousand\tSteps ") == "three thousand steps");
  CHECK(join({"a", "b"}, ", ") == "a, b");
  CHECK(split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
  CHECK(starts_with_ci("Hello there", "hello"));
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
}

TEST_CASE("stage, speaker, mechanism and snapshot tokens") {
  CHECK(stage_token(Stage::kGoalSetting) == "goal_setting");
  CHECK(parse_stage_token("goal_implementation") == Stage::kGoalImplementation);
  CHECK_FALSE(parse_stage_token("stage_x"));
  CHECK(parse_speaker(speaker_name(Speaker::kCoach)) == Speaker::kCoach);
  CHECK(mechanism_token(Mechanism::kEmotionalReaction) == "[EMOR]");
  CHECK(mechanism_token(Mechanism::kInterpretation) == "[INTERP]");
  CHECK(mechanism_token(Mechanism::kExploration) == "[EXPLOR]");
  CHECK(parse_mechanism_name("exploration") == Mechanism::kExploration);
  CHECK(parse_snapshot_point("backward") == SnapshotPoint::kBackward);

  const MechanismSet m{Mechanism::kExploration, Mechanism::kInterpretation};
  CHECK(m.tokens() == "[INTERP] [EXPLOR]");
  CHECK(m.size() == 2);
  CHECK(mechanisms_from_json(mechanisms_to_json(m)) == m);
  for (unsigned bits = 0; bits < 8; ++bits) {
    const auto s = MechanismSet::from_bits(static_cast<std::uint8_t>(bits));
    CHECK(s.bits() == bits);
  }
}

TEST_CASE("session context window rules") {
  SessionContext ctx;
  ctx.window = {{Speaker::kCoach, "Hi", 0, std::nullopt}, {Speaker::kPatient, "walk", 1, std::nullopt}};
  CHECK_NOTHROW(ctx.validate());
  CHECK(ctx.patient_text() == "walk");
  CHECK(ctx.coach_text() == "Hi");
  ctx.window.push_back(ctx.window.back());
  CHECK_THROWS_AS(ctx.validate(), ValidationError);
  ctx.window = {{Speaker::kPatient, "a", 0, std::nullopt}, {Speaker::kPatient, "b", 1, std::nullopt}};
  CHECK_THROWS_AS(ctx.validate(), ValidationError);
}

TEST_CASE("emotion vocabulary and predictions") {
  const auto vocab = EmotionVocabulary::builtin();
  CHECK(vocab->size() == kEmotionCount);
  CHECK(vocab->index_of("Guilty"));
  CHECK_FALSE(vocab->index_of("Bored"));
  CHECK(*EmotionVocabulary::load(std::string(GOALCOACH_SOURCE_DIR) + "/data/emotions.txt")->index_of("Proud") ==
        *vocab->index_of("Proud"));
  CHECK_THROWS_AS(EmotionVocabulary::from_labels({"a", "b"}), SchemaError);

  const auto u = EmotionPrediction::uniform(vocab);
  for (double p : u.probabilities()) CHECK(p == doctest::Approx(1.0 / 32));
  const auto top = u.top_k(2);
  CHECK(top[0].first == vocab->labels()[0]);
  CHECK(top[1].first == vocab->labels()[1]);

  CHECK_THROWS_AS(EmotionPrediction(vocab, std::vector<double>(32, 0.5)), ValidationError);
  CHECK_THROWS_AS(EmotionPrediction(vocab, std::vector<double>(31, 1.0 / 31)), ValidationError);

  std::vector<double> p(32, 0.0);
  p[*vocab->index_of("Guilty")] = 0.6;
  p[*vocab->index_of("Ashamed")] = 0.4;
  const EmotionPrediction e(vocab, p);
  CHECK(e.top_k(1)[0].first == "Guilty");
  const auto back = emotion_from_json(emotion_to_json(e), vocab);
  CHECK(back.probabilities() == e.probabilities());
}

TEST_CASE("turn and snapshot json round trip") {
  const DialogueTurn t{Speaker::kCoach, "Which days?", 3, Stage::kGoalImplementation};
  CHECK(turn_from_json(turn_to_json(t)) == t);
  GoalSnapshot s;
  s.belief.add(Slot::kActivity, "swim");
  s.point = SnapshotPoint::kBackward;
  s.week_id = "w9";
  const GoalSnapshot back = snapshot_from_json(snapshot_to_json(s));
  CHECK(back.belief == s.belief);
  CHECK(back.point == s.point);
  CHECK(back.week_id == s.week_id);
}
