// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/core/json_io.hpp"

#include "goalcoach/core/errors.hpp"

namespace goalcoach {

Json belief_to_json(const BeliefState& b) {
  Json slots = Json::object();
  for (Slot s : kAllSlots) {
    if (b.filled(s)) slots[std::string(slot_name(s))] = b.values(s);
  }
  return Json{{"slots", slots}, {"turn_index", b.turn_index()}};
}

BeliefState belief_from_json(const Json& j) {
  if (!j.is_object()) throw MalformedBelief("belief must be a JSON object");
  const Json& slots = j.contains("slots") ? j.at("slots") : j;
  if (!slots.is_object()) throw MalformedBelief("belief slots must be an object");
  BeliefState b;
  for (const auto& [key, value] : slots.items()) {
    if (!j.contains("slots") && key == "turn_index") continue;
    auto slot = parse_slot(key);
    if (!slot) throw MalformedBelief("unknown slot '" + key + "'");
    if (value.is_string()) {
      b.add(*slot, value.get<std::string>());
    } else if (value.is_array()) {
      for (const auto& v : value) {
        if (!v.is_string()) throw MalformedBelief("slot values must be strings");
        b.add(*slot, v.get<std::string>());
      }
    } else {
      throw MalformedBelief("slot '" + key + "' must map to a string list");
    }
  }
  if (j.contains("turn_index")) b.set_turn_index(j.at("turn_index").get<int>());
  return b;
}

Json turn_to_json(const DialogueTurn& t) {
  Json j{{"speaker", std::string(speaker_name(t.speaker))},
         {"text", t.text},
         {"turn_index", t.turn_index}};
  if (t.stage) j["stage"] = std::string(stage_token(*t.stage));
  return j;
}

DialogueTurn turn_from_json(const Json& j) {
  DialogueTurn t;
  auto sp = parse_speaker(j.at("speaker").get<std::string>());
  if (!sp) throw ValidationError("unknown speaker");
  t.speaker = *sp;
  t.text = j.at("text").get<std::string>();
  t.turn_index = j.value("turn_index", 0);
  if (j.contains("stage") && !j.at("stage").is_null()) {
    auto st = parse_stage_token(j.at("stage").get<std::string>());
    if (!st) throw ValidationError("unknown stage");
    t.stage = *st;
  }
  return t;
}

Json mechanisms_to_json(MechanismSet m) {
  Json arr = Json::array();
  for (Mechanism x : m.to_vector()) arr.push_back(std::string(mechanism_name(x)));
  return arr;
}

MechanismSet mechanisms_from_json(const Json& j) {
  MechanismSet out;
  for (const auto& v : j) {
    const auto s = v.get<std::string>();
    auto m = parse_mechanism_name(s);
    if (!m) m = parse_mechanism_token(s);
    if (!m) throw ValidationError("unknown mechanism '" + s + "'");
    out.insert(*m);
  }
  return out;
}

Json emotion_to_json(const EmotionPrediction& e) {
  Json dist = Json::object();
  const auto& labels = e.vocabulary().labels();
  for (std::size_t i = 0; i < labels.size(); ++i) dist[labels[i]] = e.probabilities()[i];
  Json top = Json::array();
  for (const auto& [label, p] : e.top_k(2)) top.push_back({{"label", label}, {"probability", p}});
  return Json{{"distribution", dist}, {"top", top}};
}

EmotionPrediction emotion_from_json(const Json& j,
                                    std::shared_ptr<const EmotionVocabulary> vocab) {
  const Json& dist = j.at("distribution");
  std::vector<double> probs(vocab->size(), 0.0);
  for (const auto& [label, p] : dist.items()) {
    auto idx = vocab->index_of(label);
    if (!idx) throw ValidationError("unknown emotion label '" + label + "'");
    probs[*idx] = p.get<double>();
  }
  return EmotionPrediction(std::move(vocab), std::move(probs));
}

Json snapshot_to_json(const GoalSnapshot& s) {
  return Json{{"belief", belief_to_json(s.belief)},
              {"point", std::string(snapshot_point_name(s.point))},
              {"week_id", s.week_id}};
}

GoalSnapshot snapshot_from_json(const Json& j) {
  GoalSnapshot s;
  s.belief = belief_from_json(j.at("belief"));
  auto p = parse_snapshot_point(j.at("point").get<std::string>());
  if (!p) throw ValidationError("unknown snapshot point");
  s.point = *p;
  s.week_id = j.value("week_id", "");
  return s;
}

}  // namespace goalcoach
