// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/core/dialogue.hpp"

#include <bit>

#include "goalcoach/core/errors.hpp"

namespace goalcoach {

std::string_view stage_token(Stage s) noexcept {
  return s == Stage::kGoalSetting ? "goal_setting" : "goal_implementation";
}

std::optional<Stage> parse_stage_token(std::string_view token) noexcept {
  if (token == "goal_setting") return Stage::kGoalSetting;
  if (token == "goal_implementation") return Stage::kGoalImplementation;
  return std::nullopt;
}

std::string_view speaker_name(Speaker s) noexcept {
  return s == Speaker::kPatient ? "patient" : "coach";
}

std::optional<Speaker> parse_speaker(std::string_view name) noexcept {
  if (name == "patient") return Speaker::kPatient;
  if (name == "coach") return Speaker::kCoach;
  return std::nullopt;
}

void SessionContext::validate() const {
  if (window.size() > 2) throw ValidationError("context window holds more than two turns");
  if (window.size() == 2 && window[0].speaker == window[1].speaker) {
    throw ValidationError("context window turns must alternate speakers");
  }
}

std::string SessionContext::patient_text() const {
  for (auto it = window.rbegin(); it != window.rend(); ++it) {
    if (it->speaker == Speaker::kPatient) return it->text;
  }
  return {};
}

std::string SessionContext::coach_text() const {
  for (auto it = window.rbegin(); it != window.rend(); ++it) {
    if (it->speaker == Speaker::kCoach) return it->text;
  }
  return {};
}

std::string_view mechanism_token(Mechanism m) noexcept {
  switch (m) {
    case Mechanism::kEmotionalReaction: return "[EMOR]";
    case Mechanism::kInterpretation: return "[INTERP]";
    case Mechanism::kExploration: return "[EXPLOR]";
  }
  return "";
}

std::optional<Mechanism> parse_mechanism_token(std::string_view token) noexcept {
  for (Mechanism m : kAllMechanisms) {
    if (mechanism_token(m) == token) return m;
  }
  return std::nullopt;
}

std::string_view mechanism_name(Mechanism m) noexcept {
  switch (m) {
    case Mechanism::kEmotionalReaction: return "emotional_reaction";
    case Mechanism::kInterpretation: return "interpretation";
    case Mechanism::kExploration: return "exploration";
  }
  return "";
}

std::optional<Mechanism> parse_mechanism_name(std::string_view name) noexcept {
  for (Mechanism m : kAllMechanisms) {
    if (mechanism_name(m) == name) return m;
  }
  return std::nullopt;
}

std::size_t MechanismSet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

MechanismSet MechanismSet::from_bits(std::uint8_t bits) {
  MechanismSet s;
  s.bits_ = bits & 0x7;
  return s;
}

std::vector<Mechanism> MechanismSet::to_vector() const {
  std::vector<Mechanism> out;
  for (Mechanism m : kAllMechanisms) {
    if (contains(m)) out.push_back(m);
  }
  return out;
}

std::string MechanismSet::tokens() const {
  std::string out;
  for (Mechanism m : to_vector()) {
    if (!out.empty()) out += ' ';
    out += mechanism_token(m);
  }
  return out;
}

std::string_view snapshot_point_name(SnapshotPoint p) noexcept {
  return p == SnapshotPoint::kForward ? "forward" : "backward";
}

std::optional<SnapshotPoint> parse_snapshot_point(std::string_view name) noexcept {
  if (name == "forward") return SnapshotPoint::kForward;
  if (name == "backward") return SnapshotPoint::kBackward;
  return std::nullopt;
}

}  // namespace goalcoach
