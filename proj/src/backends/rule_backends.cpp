// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/backends/rule_backends.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <set>

#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"
#include "goalcoach/nlg/emp.hpp"
#include "goalcoach/nlg/hc.hpp"

namespace goalcoach {
namespace {

BackendSpec rule_spec(BackendKind kind, std::string identity) {
  return BackendSpec{kind, std::move(identity), Json::object()};
}

// ---------------------------------------------------------------------------
// slot patterns

using Words = std::vector<std::string>;

bool in(const std::string& w, std::initializer_list<const char*> set) {
  return std::any_of(set.begin(), set.end(), [&](const char* s) { return w == s; });
}

const std::set<std::string>& number_words() {
  static const std::set<std::string> s = {
      "one",     "two",      "three",    "four",    "five",    "six",       "seven",
      "eight",   "nine",     "ten",      "eleven",  "twelve",  "thirteen",  "fourteen",
      "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen", "twenty",  "thirty",
      "forty",   "fifty",    "sixty",    "seventy", "eighty",  "ninety",    "hundred",
      "thousand", "couple"};
  return s;
}

bool is_number(const std::string& w) {
  static const std::regex re(R"(\d[\d,]*(\.\d+)?k?|\d+-\d+)");
  return std::regex_match(w, re) || number_words().count(w) > 0;
}

// Consecutive numeric tokens, optionally "N to M" / "N or M".
std::size_t number_len(const Words& w, std::size_t i) {
  std::size_t n = 0;
  while (i + n < w.size() && is_number(w[i + n])) ++n;
  if (n == 0) return 0;
  if (i + n + 1 < w.size() && in(w[i + n], {"to", "or", "-"}) && is_number(w[i + n + 1])) {
    std::size_t m = 1;
    while (i + n + 1 + m < w.size() && is_number(w[i + n + 1 + m])) ++m;
    n += 1 + m;
  }
  return n;
}

std::size_t unit_after(const Words& w, std::size_t i, std::initializer_list<const char*> units) {
  const std::size_t n = number_len(w, i);
  if (n == 0 || i + n >= w.size() || !in(w[i + n], units)) return 0;
  return n + 1;
}

std::size_t match_seq(const Words& w, std::size_t i, std::initializer_list<const char*> seq) {
  std::size_t k = 0;
  for (const char* s : seq) {
    if (i + k >= w.size() || w[i + k] != s) return 0;
    ++k;
  }
  return k;
}

std::size_t amount_len(const Words& w, std::size_t i) {
  return unit_after(w, i, {"steps", "step", "flights", "flight", "laps", "lap", "reps", "floors",
                           "sets", "rounds", "calories"});
}

std::size_t duration_len(const Words& w, std::size_t i) {
  static const std::regex compact(R"(\d+-(min|mins|minute|minutes|hour|hr))");
  if (std::regex_match(w[i], compact)) return 1;
  std::size_t best = unit_after(w, i, {"min", "mins", "minute", "minutes", "hour", "hours", "hr", "hrs"});
  best = std::max({best, match_seq(w, i, {"half", "an", "hour"}), match_seq(w, i, {"an", "hour"}),
                   match_seq(w, i, {"a", "half", "hour"}),
                   match_seq(w, i, {"an", "hour", "and", "a", "half"})});
  return best;
}

std::size_t distance_len(const Words& w, std::size_t i) {
  std::size_t best = unit_after(w, i, {"mile", "miles", "km", "kms", "kilometer", "kilometers",
                                       "kilometre", "kilometres", "block", "blocks", "meters",
                                       "metres", "yards"});
  best = std::max({best, match_seq(w, i, {"a", "mile"}), match_seq(w, i, {"half", "a", "mile"}),
                   match_seq(w, i, {"a", "block"})});
  // "from home to the bus stop"
  if (w[i] == "from" && i + 3 < w.size()) {
    static const std::set<std::string> places = {"home", "work", "office", "house", "school"};
    if (places.count(w[i + 1]) && w[i + 2] == "to") {
      std::size_t j = i + 3;
      if (j < w.size() && in(w[j], {"the", "my"})) ++j;
      std::size_t nouns = 0;
      while (j + nouns < w.size() && nouns < 2 &&
             in(w[j + nouns], {"bus", "stop", "station", "work", "office", "store", "park", "home",
                               "school", "corner", "train", "mailbox"})) {
        ++nouns;
      }
      if (nouns > 0) best = std::max(best, j + nouns - i);
    }
  }
  return best;
}

std::size_t daynumber_len(const Words& w, std::size_t i) { return unit_after(w, i, {"days", "day"}); }

std::size_t repeat_len(const Words& w, std::size_t i) {
  auto per = [&](std::size_t j) -> std::size_t {
    if (j + 1 < w.size() && in(w[j], {"a", "per", "each", "every"}) && in(w[j + 1], {"day", "week"})) {
      return 2;
    }
    return 0;
  };
  std::size_t best = 0;
  if (w[i] == "daily" || w[i] == "everyday") best = 1;
  best = std::max({best, match_seq(w, i, {"every", "day"}), match_seq(w, i, {"every", "other", "day"})});
  if (in(w[i], {"a", "per", "each"}) && i + 1 < w.size() && w[i + 1] == "day") best = std::max<std::size_t>(best, 2);
  if (in(w[i], {"once", "twice", "thrice"})) best = std::max(best, 1 + per(i + 1));
  const std::size_t n = number_len(w, i);
  if (n > 0 && i + n < w.size() && w[i + n] == "times") best = std::max(best, n + 1 + per(i + n + 1));
  return best;
}

std::size_t time_point(const Words& w, std::size_t i) {
  if (i >= w.size()) return 0;
  static const std::regex whole(R"(\d{1,2}(:\d{2})?(am|pm))");
  static const std::regex range(R"(\d{1,2}(:\d{2})?(am|pm)?-\d{1,2}(:\d{2})?(am|pm))");
  static const std::regex clock(R"(\d{1,2}:\d{2})");
  static const std::regex hour(R"(\d{1,2}(:\d{2})?)");
  const auto& t = w[i];
  if (std::regex_match(t, whole) || std::regex_match(t, range)) return 1;
  if (std::regex_match(t, hour) && i + 1 < w.size() && in(w[i + 1], {"am", "pm", "a.m", "p.m", "o'clock"})) {
    return 2;
  }
  if (std::regex_match(t, clock)) return 1;
  if (in(t, {"noon", "midnight"})) return 1;
  return 0;
}

std::size_t time_len(const Words& w, std::size_t i) {
  std::size_t best = 0;
  if (const std::size_t n = time_point(w, i); n > 0) {
    best = n;
    if (i + n + 1 < w.size() && in(w[i + n], {"to", "-", "until", "till", "and"})) {
      if (const std::size_t m = time_point(w, i + n + 1); m > 0) best = n + 1 + m;
    }
  }
  if (w[i] == "at" && i + 1 < w.size() && in(w[i + 1], {"noon", "night", "lunch", "lunchtime", "midnight", "dawn", "sunrise", "sunset"})) {
    best = std::max<std::size_t>(best, 2);
  }
  if (w[i] == "in" && i + 2 < w.size() && w[i + 1] == "the" && in(w[i + 2], {"morning", "afternoon", "evening", "evenings", "mornings"})) {
    best = std::max<std::size_t>(best, 3);
  }
  if (in(w[i], {"after", "before", "during"}) && i + 1 < w.size()) {
    std::size_t j = i + 1;
    if (in(w[j], {"my", "the"})) ++j;
    if (j < w.size() && in(w[j], {"work", "lunch", "dinner", "breakfast", "school", "supper"})) {
      std::size_t len = j + 1 - i;
      if (j + 1 < w.size() && w[j + 1] == "break") ++len;
      best = std::max(best, len);
    }
  }
  // bare part-of-day words, but not greetings ("good morning")
  const bool greeting = i > 0 && w[i - 1] == "good";
  if (!greeting && in(w[i], {"morning", "mornings", "afternoon", "afternoons", "evening", "evenings", "tonight", "lunchtime"})) {
    best = std::max<std::size_t>(best, 1);
  }
  return best;
}

std::size_t location_len(const Words& w, std::size_t i) {
  static const std::set<std::string> places = {
      "park",  "gym",   "work",   "home",   "office", "neighborhood", "neighbourhood", "block",
      "track", "mall",  "pool",   "beach",  "trail",  "trails",       "lake",          "school",
      "treadmill", "street", "yard", "backyard", "house", "building", "campus", "ymca", "church",
      "store", "garden", "river", "stadium", "field"};
  if (in(w[i], {"outside", "outdoors", "indoors", "inside"})) {
    // "inside" alone is rarely a location; require it to end the phrase
    return w[i] == "inside" ? 0 : 1;
  }
  if (!in(w[i], {"at", "around", "in", "near", "on", "to"})) return 0;
  std::size_t j = i + 1;
  if (j < w.size() && in(w[j], {"the", "my", "our", "a", "this", "that"})) ++j;
  if (j < w.size() && places.count(w[j]) == 0 && j + 1 < w.size() && places.count(w[j + 1]) > 0) ++j;
  if (j < w.size() && places.count(w[j]) > 0) {
    if (w[i] == "to" && j == i + 1) return 0;  // "to work" is usually commuting
    if (w[i] == "in" && w[j] == "work") return 0;
    return j + 1 - i;
  }
  return 0;
}

std::size_t dayname_len(const Words& w, std::size_t i) {
  static const std::regex day(
      R"((monday|tuesday|wednesday|thursday|friday|saturday|sunday)s?|mon|tue|tues|wed|thu|thur|thurs|fri|sat|weekends?|weekdays?)");
  static const std::regex range(R"((mon|tue|wed|thu|fri|sat|sun)[a-z]*-(mon|tue|wed|thu|fri|sat|sun)[a-z]*)");
  if (std::regex_match(w[i], day) || std::regex_match(w[i], range)) return 1;
  return 0;
}

std::size_t score_len(const Words& w, std::size_t i) {
  static const std::regex frac(R"((10|[1-9])/10)");
  if (std::regex_match(w[i], frac)) return 1;
  auto small = [](const std::string& t) {
    static const std::regex re(R"(10|[1-9])");
    return std::regex_match(t, re) ||
           in(t, {"one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"});
  };
  if (!small(w[i])) return 0;
  if (match_seq(w, i + 1, {"out", "of", "10"}) > 0 || match_seq(w, i + 1, {"out", "of", "ten"}) > 0) return 1;
  const bool at_end = i + 1 == w.size() || in(w[i + 1], {".", "!", ",", "?"});
  if (!at_end) return 0;
  if (i == 0) return 1;
  return in(w[i - 1], {"say", "a", "about", "maybe", "probably", "is", "it's", "i'm", "at", "around", "like"}) ? 1 : 0;
}

std::size_t activity_len(const Words& w, std::size_t i) {
  static const std::vector<std::vector<std::string>> lexicon = {
      {"walk"},     {"walks"},    {"walking"},  {"walked"},   {"jog"},      {"jogs"},
      {"jogging"},  {"jogged"},   {"run"},      {"runs"},     {"running"},  {"ran"},
      {"swim"},     {"swimming"}, {"swam"},     {"bike"},     {"biking"},   {"bike", "ride"},
      {"cycle"},    {"cycling"},  {"yoga"},     {"dance"},    {"dancing"},  {"hike"},
      {"hiking"},   {"hiked"},    {"biked"},    {"danced"},   {"stretch"},  {"stretching"}, {"pilates"}, {"zumba"},   {"aerobics"},
      {"elliptical"}, {"tennis"}, {"basketball"}, {"soccer"}, {"golf"},     {"gardening"},
      {"squats"},   {"pushups"},  {"rowing"},   {"exercise"}, {"exercising"}, {"workout"},
      {"weightlifting"}, {"stair", "climbing"}, {"climb", "stairs"}, {"climbing", "stairs"},
      {"take", "the", "stairs"}, {"taking", "the", "stairs"}, {"lift", "weights"},
      {"lifting", "weights"}, {"weight", "lifting"}, {"work", "out"}, {"working", "out"},
      {"push", "ups"}, {"jumping", "jacks"}, {"stationary", "bike"}};
  std::size_t best = 0;
  for (const auto& entry : lexicon) {
    if (i + entry.size() > w.size()) continue;
    bool ok = true;
    for (std::size_t k = 0; k < entry.size() && ok; ++k) ok = w[i + k] == entry[k];
    if (ok) best = std::max(best, entry.size());
  }
  return best;
}

struct Matcher {
  Slot slot;
  std::size_t (*fn)(const Words&, std::size_t);
};

// Tie-break order.
constexpr Matcher kMatchers[] = {
    {Slot::kTime, time_len},         {Slot::kRepeatation, repeat_len}, {Slot::kDuration, duration_len},
    {Slot::kAmount, amount_len},     {Slot::kDistance, distance_len},  {Slot::kDaynumber, daynumber_len},
    {Slot::kScore, score_len},       {Slot::kLocation, location_len},  {Slot::kDayname, dayname_len},
    {Slot::kActivity, activity_len},
};

// ---------------------------------------------------------------------------
// cue helpers

bool any_phrase(const std::string& lowered, std::initializer_list<const char*> phrases) {
  return std::any_of(phrases.begin(), phrases.end(),
                     [&](const char* p) { return contains_phrase(lowered, p); });
}

bool revision_cue(const std::string& lowered) {
  return any_phrase(lowered, {"change", "instead", "i want", "i'd like", "i would like", "let's",
                              "lets", "make it", "how about", "can we", "i'll", "i will", "switch",
                              "new goal", "rather", "actually"});
}

const std::vector<std::string>& confirm_cues() {
  static const std::vector<std::string> cues = {
      "so your goal is", "your goal is", "does that sound", "sounds like a plan", "is that right",
      "to confirm", "let me confirm", "so you will", "so you'll", "great goal"};
  return cues;
}

}  // namespace

// ---------------------------------------------------------------------------

RuleSlotTagger::RuleSlotTagger() : spec_(rule_spec(BackendKind::kSlotTagger, "rule/slot_tagger@1")) {}

std::vector<std::string> RuleSlotTagger::tag(const std::vector<std::string>& tokens) const {
  Words w;
  w.reserve(tokens.size());
  for (const auto& t : tokens) w.push_back(to_lower(t));
  std::vector<std::string> labels(w.size(), "O");
  std::size_t i = 0;
  while (i < w.size()) {
    std::size_t best = 0;
    Slot slot = Slot::kActivity;
    for (const auto& m : kMatchers) {
      const std::size_t n = m.fn(w, i);
      if (n > best) {
        best = n;
        slot = m.slot;
      }
    }
    if (best == 0) {
      ++i;
      continue;
    }
    const std::string name(slot_name(slot));
    labels[i] = "B-" + name;
    for (std::size_t k = 1; k < best; ++k) labels[i + k] = "I-" + name;
    i += best;
  }
  return labels;
}

// ---------------------------------------------------------------------------

RuleCarryover::RuleCarryover() : spec_(rule_spec(BackendKind::kCarryover, "rule/carryover@1")) {}

CarryoverDecision RuleCarryover::decide(const CarryoverQuery& q) const {
  const std::string patient = to_lower(q.context.patient_text());
  const std::string coach = to_lower(q.context.coach_text());
  CarryoverDecision d{q.slot, false, 0.9};
  if (revision_cue(patient)) return d;
  if (q.context.previous_stage == Stage::kGoalImplementation) {
    d.keep_previous = true;
    return d;
  }
  const bool coach_confirmed =
      std::any_of(confirm_cues().begin(), confirm_cues().end(),
                  [&](const std::string& c) { return contains_phrase(coach, c); }) &&
      std::any_of(q.previous_values.begin(), q.previous_values.end(),
                  [&](const std::string& v) { return contains_phrase(coach, to_lower(v)); });
  d.keep_previous = coach_confirmed;
  return d;
}

// ---------------------------------------------------------------------------

RuleSeqBackend::RuleSeqBackend() : spec_(rule_spec(BackendKind::kSeqMultitask, "rule/seq_multitask@1")) {}

bool RuleSeqBackend::goal_complete(const BeliefState& b) {
  const bool quantity = b.filled(Slot::kAmount) || b.filled(Slot::kDuration) || b.filled(Slot::kDistance);
  const bool days = b.filled(Slot::kDayname) || b.filled(Slot::kDaynumber) || b.filled(Slot::kRepeatation);
  return b.filled(Slot::kActivity) && quantity && days;
}

bool RuleSeqBackend::summarizes_goal(const std::string& coach_text) {
  const std::string lowered = to_lower(coach_text);
  return std::any_of(confirm_cues().begin(), confirm_cues().end(),
                     [&](const std::string& c) { return contains_phrase(lowered, c); });
}

bool RuleSeqBackend::requests_new_goal(const std::string& patient_text) {
  return any_phrase(to_lower(patient_text),
                    {"change my goal", "change the goal", "new goal", "different goal", "change goals"});
}

namespace {

bool objects(const std::string& patient) {
  const std::string lowered = to_lower(patient);
  return any_phrase(lowered, {"no", "not", "nope", "change", "instead", "actually", "wait"});
}

const char* first_quantity(const BeliefState& b) {
  if (b.filled(Slot::kAmount)) return "[amount]";
  if (b.filled(Slot::kDuration)) return "[duration]";
  if (b.filled(Slot::kDistance)) return "[distance]";
  return nullptr;
}

std::string goal_summary(const BeliefState& b) {
  std::string s = "[activity]";
  if (const char* q = first_quantity(b)) s += std::string(" ") + q;
  if (b.filled(Slot::kLocation)) s += " [location]";
  if (b.filled(Slot::kDayname)) {
    s += " on [dayname]";
  } else if (b.filled(Slot::kDaynumber)) {
    s += " [daynumber] a week";
  }
  if (b.filled(Slot::kRepeatation)) s += " [repeatation]";
  if (b.filled(Slot::kTime)) s += " [time]";
  return s;
}

std::string goal_setting_template(const BeliefState& b) {
  if (!b.filled(Slot::kActivity)) {
    return "Let's set [activity] for this week. What activity would you like to do?";
  }
  if (!b.filled(Slot::kDayname) && !b.filled(Slot::kDaynumber)) {
    return "Sounds good, which days would you like to [activity]?";
  }
  if (first_quantity(b) == nullptr) {
    return "How long or how far would you like to [activity] each time?";
  }
  if (!b.filled(Slot::kTime)) {
    return "What time of day works best for you to [activity]?";
  }
  if (!b.filled(Slot::kScore)) {
    return std::string("On a scale of 1 to 10, how confident are you that you can [activity] ") +
           first_quantity(b) + "?";
  }
  return "Great, so your goal is to " + goal_summary(b) + ". Does that sound right?";
}

std::string goal_implementation_template(const BeliefState& b) {
  return "How is your goal going? Were you able to " + goal_summary(b) + "?";
}

}  // namespace

std::string RuleSeqBackend::generate(const std::string& input, const DecodeOptions&) const {
  const AssembledInput in = split_assembled(input);
  const auto stage = parse_stage_token(in.stage_token);
  if (!stage) throw BackendFailure("unknown stage token '" + in.stage_token + "'");
  const BeliefState belief = parse_belief(in.belief_text);
  if (in.task_prefix == kStagePrefix) {
    const auto window = parse_context(in.context_text);
    std::string coach;
    std::string patient;
    for (const auto& t : window) (t.speaker == Speaker::kCoach ? coach : patient) = t.text;
    Stage next = *stage;
    if (*stage == Stage::kGoalImplementation) {
      if (requests_new_goal(patient)) next = Stage::kGoalSetting;
    } else if (goal_complete(belief) && summarizes_goal(coach) && !objects(patient)) {
      next = Stage::kGoalImplementation;
    }
    return std::string(stage_token(next));
  }
  if (in.task_prefix == kResponsePrefix) {
    return *stage == Stage::kGoalSetting ? goal_setting_template(belief) : goal_implementation_template(belief);
  }
  throw BackendFailure("unknown task prefix '" + in.task_prefix + "'");
}

// ---------------------------------------------------------------------------

RetrievalSeqBackend::RetrievalSeqBackend(std::vector<std::pair<std::string, std::string>> pairs)
    : spec_(rule_spec(BackendKind::kSeqMultitask, "rule/retrieval@1")), pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw ConfigError("retrieval backend needs at least one pair");
}

std::string RetrievalSeqBackend::generate(const std::string& input, const DecodeOptions&) const {
  const auto q = tokenize_words(to_lower(input));
  const std::set<std::string> qs(q.begin(), q.end());
  double best = -1.0;
  const std::string* out = &pairs_.front().second;
  for (const auto& [src, tgt] : pairs_) {
    const auto t = tokenize_words(to_lower(src));
    const std::set<std::string> ts(t.begin(), t.end());
    std::size_t inter = 0;
    for (const auto& x : ts) inter += qs.count(x);
    const double uni = static_cast<double>(qs.size() + ts.size() - inter);
    const double jac = uni > 0 ? static_cast<double>(inter) / uni : 0.0;
    if (jac > best) {
      best = jac;
      out = &tgt;
    }
  }
  return *out;
}

// ---------------------------------------------------------------------------

int emotion_valence(std::string_view label) {
  static const std::set<std::string> negative = {
      "afraid",       "angry",      "annoyed",   "anxious",   "apprehensive", "ashamed",
      "devastated",   "disappointed", "disgusted", "embarrassed", "furious",    "guilty",
      "jealous",      "lonely",     "sad",       "terrified"};
  static const std::set<std::string> neutral = {"nostalgic", "sentimental", "anticipating", "prepared"};
  const std::string l = to_lower(label);
  if (negative.count(l)) return -1;
  if (neutral.count(l)) return 0;
  return 1;
}

RuleEmotionClassifier::RuleEmotionClassifier(std::shared_ptr<const EmotionVocabulary> vocab)
    : spec_(rule_spec(BackendKind::kEmotionClassifier, "rule/emotion_lexicon@1")), vocab_(std::move(vocab)) {}

std::vector<double> RuleEmotionClassifier::predict(const std::string& utterance) const {
  struct Cue {
    std::vector<const char*> phrases;
    std::vector<std::pair<const char*, double>> labels;
  };
  static const std::vector<Cue> cues = {
      {{"sorry", "my fault", "apologize"}, {{"Guilty", 1.0}, {"Ashamed", 0.7}}},
      {{"sick", "migraine", "headache", "ill", "pain", "hurt", "hurts", "injured", "flu", "not feeling well",
        "not feeling very well", "fever", "hospital", "emergency"},
       {{"Sad", 1.0}, {"Anxious", 0.5}}},
      {{"tired", "exhausted", "worn out"}, {{"Sad", 0.8}, {"Disappointed", 0.5}}},
      {{"stressed", "worried", "nervous", "anxious", "overwhelmed"}, {{"Anxious", 1.0}, {"Apprehensive", 0.6}}},
      {{"sad", "depressed", "lonely", "down", "upset"}, {{"Sad", 1.0}, {"Lonely", 0.5}}},
      {{"angry", "mad", "annoyed", "frustrated", "hate"}, {{"Annoyed", 1.0}, {"Angry", 0.7}}},
      {{"afraid", "scared", "terrified", "fear"}, {{"Afraid", 1.0}, {"Terrified", 0.5}}},
      {{"disappointed", "failed", "couldn't", "could not", "didn't manage"}, {{"Disappointed", 1.0}, {"Sad", 0.5}}},
      {{"happy", "awesome", "excited", "glad", "wonderful", "amazing"}, {{"Joyful", 1.0}, {"Excited", 0.6}}},
      {{"proud", "reached", "accomplished", "managed", "did it", "made it"}, {{"Proud", 1.0}, {"Confident", 0.5}}},
      {{"believe", "wow", "surprised", "can you believe"}, {{"Surprised", 1.0}, {"Impressed", 0.4}}},
      {{"want", "hope", "plan", "going to"}, {{"Hopeful", 0.5}, {"Confident", 0.2}}},
      {{"thanks", "thank you", "grateful"}, {{"Grateful", 1.0}, {"Content", 0.4}}},
  };
  const std::string lowered = to_lower(utterance);
  std::vector<double> score(vocab_->size(), 0.0);
  for (const auto& cue : cues) {
    const bool hit = std::any_of(cue.phrases.begin(), cue.phrases.end(),
                                 [&](const char* p) { return contains_phrase(lowered, p); });
    if (!hit) continue;
    for (const auto& [label, weight] : cue.labels) {
      if (auto idx = vocab_->index_of(label)) score[*idx] = std::max(score[*idx], weight);
    }
  }
  std::vector<double> p(score.size());
  double total = 0.0;
  for (std::size_t k = 0; k < score.size(); ++k) {
    p[k] = std::exp(5.0 * score[k]);
    total += p[k];
  }
  for (double& x : p) x /= total;
  return p;
}

TableEmotionClassifier::TableEmotionClassifier(std::map<std::string, Row> rows,
                                               std::shared_ptr<const EmotionVocabulary> vocab)
    : spec_(rule_spec(BackendKind::kEmotionClassifier, "rule/emotion_table@1")),
      rows_(std::move(rows)),
      vocab_(std::move(vocab)) {
  for (const auto& [utt, row] : rows_) {
    double mass = 0.0;
    for (const auto& [label, p] : row) {
      if (!vocab_->index_of(label)) throw ConfigError("emotion table: unknown label " + label);
      if (p < 0.0) throw ConfigError("emotion table: negative probability");
      mass += p;
    }
    if (mass > 1.0 + 1e-9 || row.size() >= vocab_->size()) throw ConfigError("emotion table: bad row for " + utt);
  }
}

std::shared_ptr<TableEmotionClassifier> TableEmotionClassifier::from_json(const Json& j) {
  std::map<std::string, Row> rows;
  for (const auto& rec : j) {
    Row row;
    for (const auto& t : rec.at("top")) row.emplace_back(t.at("label").get<std::string>(), t.at("p").get<double>());
    rows.emplace(rec.at("utterance").get<std::string>(), std::move(row));
  }
  return std::make_shared<TableEmotionClassifier>(std::move(rows));
}

std::vector<double> TableEmotionClassifier::predict(const std::string& utterance) const {
  const std::size_t n = vocab_->size();
  const auto it = rows_.find(trim(utterance));
  if (it == rows_.end()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  std::vector<double> p(n, 0.0);
  std::vector<bool> fixed(n, false);
  double mass = 0.0;
  for (const auto& [label, prob] : it->second) {
    const std::size_t k = *vocab_->index_of(label);
    p[k] = prob;
    fixed[k] = true;
    mass += prob;
  }
  const double rest = (1.0 - mass) / static_cast<double>(n - it->second.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (!fixed[k]) p[k] = rest;
  }
  return p;
}

// ---------------------------------------------------------------------------

RuleMechanismLabeler::RuleMechanismLabeler()
    : spec_(rule_spec(BackendKind::kMechanismLabeler, "rule/mechanism_keywords@1")) {}

MechanismSet RuleMechanismLabeler::label(const std::string& response) const {
  const std::string lowered = to_lower(response);
  const auto words = tokenize_words(lowered);
  MechanismSet out;
  const bool question = lowered.find('?') != std::string::npos ||
                        (!words.empty() && in(words.front(), {"what", "how", "why", "when", "did", "are", "do"}));
  if (question) out.insert(Mechanism::kExploration);
  if (any_phrase(lowered, {"i know", "i understand", "must be", "i've had", "i have had", "i've been",
                           "that makes sense", "understandable", "i can imagine", "sometimes it"})) {
    out.insert(Mechanism::kInterpretation);
  }
  if (any_phrase(lowered, {"sorry", "oh no", "i hope", "glad", "worried", "so happy", "wonderful",
                           "that's great", "congratulations", "oh geez", "i hear you"})) {
    out.insert(Mechanism::kEmotionalReaction);
  }
  return out;
}

// ---------------------------------------------------------------------------

TemplateEmpathyGenerator::TemplateEmpathyGenerator()
    : spec_(rule_spec(BackendKind::kCausalLm, "rule/empathy_templates@1")) {}

std::string TemplateEmpathyGenerator::sentence(Mechanism m, int valence) {
  switch (m) {
    case Mechanism::kEmotionalReaction:
      return valence < 0   ? "Oh no, I hope you are okay."
             : valence > 0 ? "That's wonderful, I'm so happy for you!"
                           : "I hear you.";
    case Mechanism::kInterpretation:
      return valence < 0   ? "I've had this experience before. Sometimes it really hits you."
             : valence > 0 ? "I know how good that feels. Hard work pays off."
                           : "I understand, that makes sense.";
    case Mechanism::kExploration:
      return valence < 0   ? "Oh geez, sorry to hear that. Are you feeling better?"
             : valence > 0 ? "That's great! How did it feel?"
                           : "How are you feeling about it?";
  }
  return {};
}

std::string TemplateEmpathyGenerator::complete(const std::string& prompt, const DecodeOptions&) const {
  // "<|bos|> TOKENS utterance <|sep|>"
  const std::string bos = std::string(kBos) + " ";
  const std::string sep = " " + std::string(kSep);
  if (prompt.rfind(bos, 0) != 0 || prompt.size() < bos.size() + sep.size() ||
      prompt.compare(prompt.size() - sep.size(), sep.size(), sep) != 0) {
    throw BackendFailure("malformed empathy prompt");
  }
  std::string body = prompt.substr(bos.size(), prompt.size() - bos.size() - sep.size());
  MechanismSet ms;
  while (true) {
    bool hit = false;
    for (Mechanism m : kAllMechanisms) {
      const std::string tok = std::string(mechanism_token(m)) + " ";
      if (body.rfind(tok, 0) == 0) {
        ms.insert(m);
        body.erase(0, tok.size());
        hit = true;
      }
    }
    if (!hit) break;
  }
  if (ms.empty()) throw BackendFailure("empathy prompt carries no mechanism");
  const auto probs = emotion_.predict(body);
  const EmotionPrediction e(emotion_.vocabulary(), probs);
  const auto [mn, mx] = std::minmax_element(probs.begin(), probs.end());
  const int valence = (*mx - *mn) < 1e-12 ? 0 : emotion_valence(e.top_k(1).front().first);
  std::vector<std::string> parts;
  for (Mechanism m : ms.to_vector()) parts.push_back(sentence(m, valence));
  return join(parts, " ") + " " + std::string(kEos);
}

// ---------------------------------------------------------------------------

ConstantRegressor::ConstantRegressor(double value)
    : spec_(rule_spec(BackendKind::kEmpathyRegressor, "rule/constant@1")), value_(value) {
  spec_.config["value"] = value;
}

UniformLM::UniformLM(std::size_t vocab_size)
    : spec_(rule_spec(BackendKind::kLmScorer, "rule/uniform@1")), vocab_size_(vocab_size) {
  if (vocab_size_ == 0) throw ConfigError("uniform LM needs a non-empty vocabulary");
  spec_.config["vocab_size"] = vocab_size;
}

LogLikelihood UniformLM::log_likelihood(const std::string& text) const {
  const std::size_t n = lm_tokenize(text).size();
  return {-static_cast<double>(n) * std::log(static_cast<double>(vocab_size_)), n};
}

IdentityParaphraser::IdentityParaphraser() : spec_(rule_spec(BackendKind::kParaphraser, "rule/identity@1")) {}

}  // namespace goalcoach
