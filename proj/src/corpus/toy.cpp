// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/corpus/toy.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"
#include "goalcoach/nlg/hc.hpp"

namespace goalcoach {

namespace {

struct Piece {
  std::string text;
  std::optional<Slot> slot;
};

Piece lit(std::string s) { return Piece{std::move(s), std::nullopt}; }
Piece val(Slot slot, std::string s) { return Piece{std::move(s), slot}; }

AnnotatedUtterance build(const std::vector<Piece>& pieces) {
  std::string text;
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  std::vector<Slot> slots;
  for (const auto& p : pieces) {
    if (p.slot) {
      ranges.emplace_back(text.size(), text.size() + p.text.size());
      slots.push_back(*p.slot);
    }
    text += p.text;
  }
  const auto tokens = tokenize(text);
  std::vector<SlotSpan> spans;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    int first = -1, last = -1;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      if (tokens[t].begin == ranges[i].first) first = static_cast<int>(t);
      if (tokens[t].end == ranges[i].second) last = static_cast<int>(t);
    }
    if (first < 0 || last < first) throw std::logic_error("toy value not token aligned: " + text);
    spans.push_back(SlotSpan{slots[i], text.substr(ranges[i].first, ranges[i].second - ranges[i].first), first, last});
  }
  return AnnotatedUtterance::make(text, spans);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }
  bool chance(double p) { return static_cast<double>(eng_() % 1000000) < p * 1e6; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 eng_;
};

struct Activity {
  std::string base;
  std::string past;
  bool counts_steps;
};

const std::vector<Activity>& activities() {
  static const std::vector<Activity> a = {
      {"walk", "walked", true}, {"jog", "jogged", true}, {"run", "ran", true},    {"hike", "hiked", true},
      {"swim", "swam", false},  {"bike", "biked", false}, {"dance", "danced", false},
  };
  return a;
}

const std::vector<std::string>& day_names() {
  static const std::vector<std::string> d = {"Monday", "Tuesday", "Wednesday", "Thursday",
                                             "Friday", "Saturday", "Sunday"};
  return d;
}

const std::vector<std::string>& times() {
  static const std::vector<std::string> t = {"in the morning", "in the evening", "in the afternoon",
                                             "after work",     "after dinner",   "before work",
                                             "7am",            "6:30pm",         "at noon"};
  return t;
}

// Quantity value with its slot; `with_for` prefixes durations with "for ".
struct Quantity {
  Slot slot;
  std::string value;
};

Quantity draw_quantity(Rng& rng, const Activity& a, std::optional<Slot> slot = std::nullopt) {
  const Slot s = slot ? *slot : (a.counts_steps && rng.below(2) == 0 ? Slot::kAmount : Slot::kDuration);
  if (s == Slot::kAmount) return {s, std::to_string(2000 + 500 * static_cast<int>(rng.below(17))) + " steps"};
  return {s, std::to_string(10 + 5 * static_cast<int>(rng.below(11))) + " minutes"};
}

std::vector<Piece> quantity_pieces(const Quantity& q) {
  if (q.slot == Slot::kDuration) return {lit("for "), val(q.slot, q.value)};
  return {val(q.slot, q.value)};
}

std::vector<std::string> draw_days(Rng& rng) {
  const std::size_t n = 1 + rng.below(3);
  std::vector<std::size_t> idx(day_names().size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < n; ++i) std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(day_names()[i]);
  return out;
}

std::vector<Piece> day_pieces(const std::vector<std::string>& days) {
  std::vector<Piece> out;
  for (std::size_t i = 0; i < days.size(); ++i) {
    if (i > 0) out.push_back(lit(i + 1 == days.size() ? " and " : ", "));
    out.push_back(val(Slot::kDayname, days[i]));
  }
  return out;
}

std::vector<Piece> time_pieces(const std::string& t) {
  if (t == "7am" || t == "6:30pm") return {lit("at "), val(Slot::kTime, t)};
  return {val(Slot::kTime, t)};
}

template <typename... Parts>
std::vector<Piece> cat(Parts&&... parts) {
  std::vector<Piece> out;
  (out.insert(out.end(), parts.begin(), parts.end()), ...);
  return out;
}

std::vector<Piece> L(std::string s) { return {lit(std::move(s))}; }

struct Goal {
  const Activity* activity = nullptr;
  Quantity quantity;
  std::vector<std::string> days;
  std::string time;
};

std::vector<Piece> summary(const Goal& g) {
  return cat(std::vector<Piece>{val(Slot::kActivity, g.activity->base), lit(" ")}, quantity_pieces(g.quantity),
             L(" on "), day_pieces(g.days), L(" "), time_pieces(g.time));
}

class WeekBuilder {
 public:
  WeekBuilder(std::string id, int dataset) {
    week_.week_id = std::move(id);
    week_.dataset = dataset;
  }

  void coach(const std::vector<Piece>& pieces, Stage stage) { push(Speaker::kCoach, pieces, stage, false); }

  // `keep` resolves collisions for this patient turn.
  void patient(const std::vector<Piece>& pieces, Stage reply_stage, bool keep) {
    push(Speaker::kPatient, pieces, reply_stage, keep);
  }

  const BeliefState& belief() const { return belief_; }
  Week take() { return std::move(week_); }

 private:
  void push(Speaker speaker, const std::vector<Piece>& pieces, Stage stage, bool keep) {
    AnnotatedUtterance u = build(pieces);
    u.week_id = week_.week_id;
    u.dataset = week_.dataset;
    u.turn_index = static_cast<int>(week_.turns.size());
    u.speaker = speaker;
    u.stage = stage;
    if (speaker == Speaker::kPatient) apply(u.spans(), keep);
    belief_.set_turn_index(u.turn_index + 1);
    u.belief = belief_;
    week_.turns.push_back(std::move(u));
  }

  void apply(const std::vector<SlotSpan>& spans, bool keep) {
    for (Slot s : kAllSlots) {
      std::vector<std::string> proposed;
      for (const auto& sp : spans) {
        if (sp.slot != s) continue;
        if (std::none_of(proposed.begin(), proposed.end(),
                         [&](const std::string& v) { return normalize_value(v) == normalize_value(sp.value); })) {
          proposed.push_back(sp.value);
        }
      }
      if (proposed.empty()) continue;
      if (!belief_.filled(s)) {
        belief_.set(s, proposed);
        continue;
      }
      const bool all_present = std::all_of(proposed.begin(), proposed.end(),
                                           [&](const std::string& v) { return belief_.has_value(s, v); });
      if (all_present || keep) continue;
      belief_.set(s, proposed);
    }
  }

  Week week_;
  BeliefState belief_;
};

const Stage GS = Stage::kGoalSetting;
const Stage GI = Stage::kGoalImplementation;

}  // namespace

Corpus generate_toy_corpus(const ToyConfig& config) {
  if (config.weeks < 1) throw ConfigError("toy corpus needs at least one week");
  Rng rng(config.seed);
  Corpus corpus;
  const int n_test = static_cast<int>(std::lround(config.test_fraction * config.weeks));
  for (int w = 0; w < config.weeks; ++w) {
    char id[16];
    std::snprintf(id, sizeof id, "toy-%03d", w);
    const int dataset = w >= config.weeks - n_test ? 2 : 1;
    WeekBuilder b(id, dataset);

    Goal g;
    g.activity = &rng.pick(activities());
    g.quantity = draw_quantity(rng, *g.activity);
    g.days = draw_days(rng);
    g.time = rng.pick(times());
    const auto act = val(Slot::kActivity, g.activity->base);

    b.coach(L(rng.pick(std::vector<std::string>{"Hi! Let's set a goal for this week. What activity would you like to do?",
                                                "Hello! What would you like to work on this week?",
                                                "Hey there! Which activity would you like to set a goal for?"})),
            GS);
    switch (rng.below(3)) {
      case 0: b.patient(cat(L("I want to "), std::vector<Piece>{act, lit(" ")}, quantity_pieces(g.quantity), L(".")), GS, false); break;
      case 1: b.patient(cat(L("I would like to "), std::vector<Piece>{act, lit(" ")}, quantity_pieces(g.quantity), L(" this week.")), GS, false); break;
      default: b.patient(cat(L("I think I can "), std::vector<Piece>{act, lit(" ")}, quantity_pieces(g.quantity), L(".")), GS, false); break;
    }
    b.coach(cat(L("Sounds good, which days would you like to "), std::vector<Piece>{act}, L("?")), GS);
    switch (rng.below(3)) {
      case 0: b.patient(cat(day_pieces(g.days), L(".")), GS, false); break;
      case 1: b.patient(cat(L("On "), day_pieces(g.days), L(".")), GS, false); break;
      default: b.patient(cat(L("I can do "), day_pieces(g.days), L(".")), GS, false); break;
    }
    b.coach(cat(L("What time of day works best for you to "), std::vector<Piece>{act}, L("?")), GS);
    switch (rng.below(3)) {
      case 0: b.patient(cat(L("Probably "), time_pieces(g.time), L(".")), GS, false); break;
      case 1: b.patient(cat(L("I prefer "), time_pieces(g.time), L(".")), GS, false); break;
      default: b.patient(cat(L("I usually have time "), time_pieces(g.time), L(".")), GS, false); break;
    }

    auto confirm = [&](Stage stage) {
      b.coach(cat(L("Great, so your goal is to "), summary(g), L(". Does that sound right?")), stage);
    };
    if (rng.chance(config.setting_revision_rate)) {
      confirm(GS);
      switch (rng.below(3)) {
        case 0: {
          Quantity q;
          do q = draw_quantity(rng, *g.activity, g.quantity.slot); while (q.value == g.quantity.value);
          g.quantity = q;
          b.patient(cat(L("Actually, let's make it "), std::vector<Piece>{val(q.slot, q.value)}, L(" instead.")), GS, false);
          break;
        }
        case 1: {
          std::vector<std::string> d;
          do d = draw_days(rng); while (d == g.days);
          g.days = d;
          b.patient(cat(L("Actually, can we do "), day_pieces(d), L(" instead?")), GS, false);
          break;
        }
        default: {
          std::string t;
          do t = rng.pick(times()); while (t == g.time);
          g.time = t;
          b.patient(cat(L("Actually, "), time_pieces(t), L(" would be better.")), GS, false);
          break;
        }
      }
    }
    confirm(GS);
    b.patient(L(rng.pick(std::vector<std::string>{"Yes!", "Yes, that sounds great.", "Sounds good.", "Yep, that works."})), GI, false);
    corpus.goals.push_back(GoldGoal{id, SnapshotPoint::kForward, b.belief()});
    b.coach(L("Awesome! Good luck this week and let me know how it goes."), GI);

    auto report = [&] {
      const auto past = val(Slot::kActivity, g.activity->past);
      switch (rng.below(3)) {
        case 0: {
          const Quantity q = draw_quantity(rng, *g.activity, g.quantity.slot);
          b.patient(cat(L("I "), std::vector<Piece>{past, lit(" ")}, quantity_pieces(q), L(" today.")), GI, true);
          break;
        }
        case 1: {
          const std::string day = rng.pick(day_names());
          b.patient(cat(L("I "), std::vector<Piece>{past, lit(" on "), val(Slot::kDayname, day)}, L(".")), GI, true);
          break;
        }
        default:
          b.patient(L(rng.pick(std::vector<std::string>{"It was hard but I did it.", "I was busy and skipped it.",
                                                        "It went well so far."})),
                    GI, true);
          break;
      }
      b.coach(L(rng.pick(std::vector<std::string>{"Nice job! How did it feel?", "That's great progress. Keep it up!",
                                                  "Thanks for the update. You can do it!"})),
              GI);
    };
    for (int r = 0; r < config.progress_reports; ++r) report();

    if (rng.chance(config.implementation_revision_rate)) {
      Quantity q;
      do q = draw_quantity(rng, *g.activity, g.quantity.slot); while (q.value == g.quantity.value);
      g.quantity = q;
      b.patient(cat(L("I want to change my goal to "), std::vector<Piece>{val(q.slot, q.value)}, L(".")), GS, false);
      confirm(GS);
      b.patient(L("Yes."), GI, false);
      corpus.goals.back().belief = b.belief();
      b.coach(L("Great, good luck with the new goal!"), GI);
      report();
    }
    corpus.goals.push_back(GoldGoal{id, SnapshotPoint::kBackward, b.belief()});
    corpus.weeks.push_back(b.take());
  }
  return corpus;
}

std::vector<std::string> patient_script(const Week& week) {
  std::vector<std::string> out;
  for (const auto& u : week.turns) {
    if (u.speaker == Speaker::kPatient) out.push_back(u.text);
  }
  return out;
}

std::vector<EmpathySample> toy_empathy_samples(int n, std::uint64_t seed) {
  static const std::vector<std::string> troubles = {
      "I had a migraine all day.",      "My knee hurts after the walk.",  "I feel so tired this week.",
      "I am stressed about work.",      "I skipped my walk again.",       "I could not sleep last night.",
      "My back has been sore.",         "I feel guilty about missing it."};
  static const std::vector<std::pair<Mechanism, std::vector<std::string>>> replies = {
      {Mechanism::kEmotionalReaction, {"Oh no, I am so sorry to hear that.", "I hope you feel better soon."}},
      {Mechanism::kInterpretation, {"I understand, that must be hard.", "I know how draining that can be."}},
      {Mechanism::kExploration, {"Are you feeling better now?", "What do you think caused it?"}},
  };
  Rng rng(seed);
  std::vector<EmpathySample> out;
  for (int i = 0; i < n; ++i) {
    const auto& [m, texts] = replies[rng.below(replies.size())];
    out.push_back(EmpathySample{rng.pick(troubles), rng.pick(texts), MechanismSet{m}});
  }
  return out;
}

}  // namespace goalcoach
