// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/orchestrator/session.hpp"

#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <spdlog/spdlog.h>

#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"
#include "goalcoach/nlg/hc.hpp"
#include "goalcoach/nlu/nlu.hpp"

namespace goalcoach {

void SessionConfig::validate() const {
  gate.validate();
  if (week_id.empty()) throw ConfigError("week_id must not be empty");
  if (mechanisms.empty()) throw ConfigError("at least one mechanism must be configured");
  if (decode.max_tokens < 1) throw ConfigError("decode.max_tokens must be >= 1");
  if (decode.top_k < 0) throw ConfigError("decode.top_k must be >= 0");
  if (!(decode.top_p > 0.0 && decode.top_p <= 1.0)) throw ConfigError("decode.top_p must lie in (0, 1]");
}

Json SessionConfig::to_json() const {
  return {{"week_id", week_id},
          {"tau", gate.tau},
          {"top_n", gate.top_n},
          {"valence_allow_list", gate.valence_allow_list},
          {"mechanisms", mechanisms_to_json(mechanisms)},
          {"prepend_empathy", prepend_empathy},
          {"decode",
           {{"sample", decode.sample},
            {"top_k", decode.top_k},
            {"top_p", decode.top_p},
            {"max_tokens", decode.max_tokens}}},
          {"seed", seed}};
}

SessionConfig SessionConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("session config must be a JSON object");
  static const std::set<std::string> known = {"week_id", "tau", "top_n", "valence_allow_list", "mechanisms",
                                              "prepend_empathy", "decode", "seed"};
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) throw ConfigError("session config: unknown field '" + k + "'");
  }
  SessionConfig c;
  try {
    c.week_id = j.value("week_id", c.week_id);
    c.gate.tau = j.value("tau", c.gate.tau);
    c.gate.top_n = j.value("top_n", c.gate.top_n);
    if (j.contains("valence_allow_list")) {
      c.gate.valence_allow_list = j.at("valence_allow_list").get<std::vector<std::string>>();
    }
    if (j.contains("mechanisms")) c.mechanisms = mechanisms_from_json(j.at("mechanisms"));
    c.prepend_empathy = j.value("prepend_empathy", c.prepend_empathy);
    if (j.contains("decode")) {
      const Json& d = j.at("decode");
      c.decode.sample = d.value("sample", c.decode.sample);
      c.decode.top_k = d.value("top_k", c.decode.top_k);
      c.decode.top_p = d.value("top_p", c.decode.top_p);
      c.decode.max_tokens = d.value("max_tokens", c.decode.max_tokens);
    }
    c.seed = j.value("seed", c.seed);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("session config: ") + e.what());
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("session config: ") + e.what());
  }
  c.validate();
  return c;
}

Json turn_result_to_json(const TurnResult& r) {
  Json spans = Json::array();
  for (const auto& s : r.spans) {
    spans.push_back({{"slot", slot_name(s.slot)}, {"value", s.value}, {"start", s.token_start}, {"end", s.token_end}});
  }
  Json variants = Json::object();
  for (const auto& [m, text] : r.empathetic_variants) variants[std::string(mechanism_name(m))] = text;
  return {{"turn_index", r.turn_index},
          {"patient_text", r.patient_text},
          {"spans", spans},
          {"belief", belief_to_json(r.belief)},
          {"stage", stage_token(r.stage)},
          {"emotion", emotion_to_json(r.emotion)},
          {"gate_fired", r.gate_fired},
          {"delexicalized_response", r.delexicalized_response},
          {"goal_response", r.goal_response},
          {"empathetic_variants", variants},
          {"coach_response", r.coach_response},
          {"diagnostics", diagnostics_to_json(r.diagnostics)}};
}

Session::Session(BackendSet backends, SessionConfig config)
    : backends_(std::move(backends)), config_(std::move(config)) {
  backends_.validate();
  config_.validate();
  events_.push_back({{"event", "open"}, {"config", config_.to_json()}, {"backends", backends_.describe()}});
}

void Session::commit_pending() {
  if (!pending_) return;
  log_.push_back(*pending_);
  pending_.reset();
}

TurnResult Session::step(const std::string& patient_utterance) {
  if (closed_) throw AlreadyClosed("session " + config_.week_id + " is closed");
  const std::string text = trim(patient_utterance);
  if (text.empty()) throw ValidationError("patient message is empty");

  std::vector<DialogueTurn> log = log_;
  if (pending_) log.push_back(*pending_);

  TurnResult r;
  r.turn_index = static_cast<int>(log.size());
  r.patient_text = text;
  Diagnostics& diag = r.diagnostics;
  const std::uint64_t turn_seed = mix_seed(config_.seed, static_cast<std::uint64_t>(r.turn_index));
  DecodeOptions decode = config_.decode;

  DialogueTurn incoming{Speaker::kPatient, text, r.turn_index, std::nullopt};
  const auto window = context_window(log, incoming);

  try {
    r.spans = extract_slots(text, *backends_.tagger);
  } catch (const BackendFailure& e) {
    spdlog::warn("slot extraction failed: {}", e.what());
    diag.fallbacks.push_back(std::string("nlu: ") + e.what() + "; no spans used");
  }
  const SessionContext before{window, stage_, belief_};
  r.belief = update_belief(belief_, r.spans, *backends_.carryover, before, &diag);

  r.emotion = detect_emotion(text, *backends_.emotion, &diag);
  r.gate_fired = should_empathize(r.emotion, config_.gate);

  const SessionContext ctx{window, stage_, r.belief};
  decode.seed = mix_seed(turn_seed, 1);
  r.stage = predict_stage(ctx, *backends_.seq, &diag, decode);
  decode.seed = mix_seed(turn_seed, 2);
  const DelexResponse delex = generate_response(ctx, r.stage, *backends_.seq, decode, &diag);
  r.delexicalized_response = delex.text;
  const Lexicalized lex = lexicalize(delex, r.belief);
  r.goal_response = lex.text;
  diag.unfilled_placeholders = lex.unfilled;

  if (r.gate_fired) {
    for (Mechanism m : config_.mechanisms.to_vector()) {
      decode.seed = mix_seed(turn_seed, 10 + static_cast<std::uint64_t>(m));
      r.empathetic_variants[m] = generate_empathetic(text, MechanismSet{m}, *backends_.empathy, decode, &diag);
    }
  }
  r.coach_response = r.goal_response;
  if (r.gate_fired && config_.prepend_empathy && !r.empathetic_variants.empty()) {
    const Mechanism lead = config_.mechanisms.to_vector().front();
    r.coach_response = r.empathetic_variants.at(lead) + " " + r.goal_response;
  }

  // commit
  const bool to_implementation = stage_ == Stage::kGoalSetting && r.stage == Stage::kGoalImplementation;
  log_ = std::move(log);
  pending_.reset();
  incoming.stage = r.stage;
  log_.push_back(incoming);
  pending_ = DialogueTurn{Speaker::kCoach, r.coach_response, r.turn_index + 1, r.stage};
  belief_ = r.belief;
  stage_ = r.stage;
  if (to_implementation) forward_ = GoalSnapshot{belief_, SnapshotPoint::kForward, config_.week_id};
  results_.push_back(r);
  events_.push_back({{"event", "patient_message"}, {"text", text}, {"result", turn_result_to_json(r)}});
  return r;
}

void Session::coach_message(const std::string& text) {
  if (closed_) throw AlreadyClosed("session " + config_.week_id + " is closed");
  const std::string t = trim(text);
  if (t.empty()) throw ValidationError("coach message is empty");
  if (pending_) {
    pending_->text = t;
    commit_pending();
  } else {
    log_.push_back(DialogueTurn{Speaker::kCoach, t, static_cast<int>(log_.size()), stage_});
  }
  events_.push_back({{"event", "coach_message"}, {"text", t}});
}

GoalSnapshot Session::snapshot_goal(SnapshotPoint point) const {
  if (point == SnapshotPoint::kForward) {
    if (!forward_) throw PreconditionError("no forward goal yet: the session has not reached goal implementation");
    return *forward_;
  }
  if (!backward_) throw PreconditionError("no backward goal yet: the session is still open");
  return *backward_;
}

GoalSnapshot Session::close() {
  if (closed_) throw AlreadyClosed("session " + config_.week_id + " is already closed");
  commit_pending();
  backward_ = GoalSnapshot{belief_, SnapshotPoint::kBackward, config_.week_id};
  closed_ = true;
  Json close{{"event", "close"}, {"backward", snapshot_to_json(*backward_)}};
  if (forward_) close["forward"] = snapshot_to_json(*forward_);
  events_.push_back(std::move(close));
  return *backward_;
}

std::vector<GoalSnapshot> Session::snapshots() const {
  std::vector<GoalSnapshot> out;
  if (forward_) out.push_back(*forward_);
  if (backward_) out.push_back(*backward_);
  return out;
}

Json Session::summary() const {
  Json turns = Json::array();
  for (const auto& t : log_) turns.push_back(turn_to_json(t));
  Json snaps = Json::array();
  for (const auto& s : snapshots()) snaps.push_back(snapshot_to_json(s));
  return {{"week_id", config_.week_id},
          {"closed", closed_},
          {"stage", stage_token(stage_)},
          {"belief", belief_to_json(belief_)},
          {"turns", turns},
          {"snapshots", snaps},
          {"config", config_.to_json()}};
}

void Session::export_transcript(std::ostream& out) const {
  for (const auto& e : events_) out << e.dump() << '\n';
}

std::vector<TranscriptSession> read_transcript(std::istream& in) {
  std::vector<TranscriptSession> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::exception& e) {
      throw SchemaError(std::string("transcript: ") + e.what(), lineno);
    }
    const std::string ev = j.value("event", "");
    if (ev == "open") {
      TranscriptSession t;
      try {
        t.config = SessionConfig::from_json(j.value("config", Json::object()));
      } catch (const ConfigError& e) {
        throw SchemaError(std::string("transcript: ") + e.what(), lineno);
      }
      t.events.push_back(j);
      out.push_back(std::move(t));
      continue;
    }
    if (ev != "patient_message" && ev != "coach_message" && ev != "close") {
      throw SchemaError("transcript: unknown event '" + ev + "'", lineno);
    }
    if (out.empty()) throw SchemaError("transcript: event before open", lineno);
    if (ev != "close" && !j.contains("text")) throw SchemaError("transcript: event without text", lineno);
    out.back().events.push_back(j);
  }
  return out;
}

std::vector<Json> replay_session(const TranscriptSession& t, const BackendSet& backends) {
  Session s(backends, t.config);
  for (const auto& e : t.events) {
    const std::string ev = e.at("event").get<std::string>();
    if (ev == "patient_message") {
      s.step(e.at("text").get<std::string>());
    } else if (ev == "coach_message") {
      s.coach_message(e.at("text").get<std::string>());
    } else if (ev == "close") {
      s.close();
    }
  }
  std::ostringstream buf;
  s.export_transcript(buf);
  std::vector<Json> lines;
  std::istringstream in(buf.str());
  std::string line;
  while (std::getline(in, line)) lines.push_back(Json::parse(line));
  return lines;
}

}  // namespace goalcoach
