// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "goalcoach/backends/registry.hpp"
#include "goalcoach/diagnostics.hpp"
#include "goalcoach/nlg/emp.hpp"
#include "goalcoach/nlu/bio.hpp"

namespace goalcoach {

struct SessionConfig {
  std::string week_id = "week-1";
  GateConfig gate;
  /// Mechanisms for which variants are produced when the gate fires; the
  /// first one also leads the default reply.
  MechanismSet mechanisms{Mechanism::kEmotionalReaction, Mechanism::kInterpretation, Mechanism::kExploration};
  /// Prepend the first empathetic variant to the goal-oriented reply.
  bool prepend_empathy = true;
  DecodeOptions decode;
  std::uint64_t seed = 0;

  /// Throws ConfigError.
  void validate() const;
  Json to_json() const;
  /// Unspecified fields keep their defaults. Throws ConfigError.
  static SessionConfig from_json(const Json& j);
};

struct TurnResult {
  int turn_index = 0;
  std::string patient_text;
  std::vector<SlotSpan> spans;
  BeliefState belief;
  Stage stage = Stage::kGoalSetting;
  EmotionPrediction emotion = EmotionPrediction::uniform(EmotionVocabulary::builtin());
  bool gate_fired = false;
  std::string delexicalized_response;
  std::string goal_response;
  std::map<Mechanism, std::string> empathetic_variants;
  std::string coach_response;  // default outgoing message
  Diagnostics diagnostics;
};

Json turn_result_to_json(const TurnResult& r);

/// One coaching week. Turns are strictly sequential; callers serialize access.
class Session {
 public:
  Session(BackendSet backends, SessionConfig config);

  /// Runs the per-turn pipeline on a patient message. The previous suggested
  /// reply is committed to the log first unless coach_message replaced it.
  /// Throws ValidationError on blank input and AlreadyClosed after close();
  /// backend failures degrade to fallbacks. State changes only on success.
  TurnResult step(const std::string& patient_utterance);

  /// Logs the message actually sent by the coach, replacing the pending
  /// suggestion if there is one.
  void coach_message(const std::string& text);

  /// Throws PreconditionError if the snapshot has not been taken.
  GoalSnapshot snapshot_goal(SnapshotPoint point) const;

  /// Commits any pending reply and records the backward snapshot.
  GoalSnapshot close();

  const SessionConfig& config() const { return config_; }
  const BeliefState& belief() const { return belief_; }
  Stage stage() const { return stage_; }
  bool closed() const { return closed_; }
  /// Committed turns, in order.
  const std::vector<DialogueTurn>& log() const { return log_; }
  const std::optional<DialogueTurn>& pending_reply() const { return pending_; }
  const std::vector<TurnResult>& results() const { return results_; }
  std::vector<GoalSnapshot> snapshots() const;
  Json summary() const;

  /// Event log of the session, one JSON object per line:
  /// open / patient_message (with result) / coach_message / close.
  void export_transcript(std::ostream& out) const;

 private:
  void commit_pending();

  BackendSet backends_;
  SessionConfig config_;
  BeliefState belief_;
  Stage stage_ = Stage::kGoalSetting;
  std::vector<DialogueTurn> log_;
  std::optional<DialogueTurn> pending_;
  std::vector<TurnResult> results_;
  std::optional<GoalSnapshot> forward_;
  std::optional<GoalSnapshot> backward_;
  std::vector<Json> events_;
  bool closed_ = false;
};

struct TranscriptSession {
  SessionConfig config;
  std::vector<Json> events;  // including open and close
};

/// Splits a transcript stream into sessions. Throws SchemaError with a line number.
std::vector<TranscriptSession> read_transcript(std::istream& in);

/// Re-drives a session from its events with the given backends. Returns the
/// regenerated transcript lines.
std::vector<Json> replay_session(const TranscriptSession& t, const BackendSet& backends);

}  // namespace goalcoach
