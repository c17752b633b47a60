// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "goalcoach/core/belief_state.hpp"

namespace goalcoach {

enum class Stage : std::uint8_t { kGoalSetting, kGoalImplementation };

/// "goal_setting" / "goal_implementation".
std::string_view stage_token(Stage s) noexcept;
std::optional<Stage> parse_stage_token(std::string_view token) noexcept;

enum class Speaker : std::uint8_t { kPatient, kCoach };

std::string_view speaker_name(Speaker s) noexcept;
std::optional<Speaker> parse_speaker(std::string_view name) noexcept;

struct DialogueTurn {
  Speaker speaker = Speaker::kPatient;
  std::string text;
  int turn_index = 0;
  std::optional<Stage> stage;

  friend bool operator==(const DialogueTurn&, const DialogueTurn&) = default;
};

/// Local context for one coach decision: up to two preceding turns (the coach
/// turn before the incoming patient message, then that message), the previous
/// stage, and the current belief.
struct SessionContext {
  std::vector<DialogueTurn> window;
  Stage previous_stage = Stage::kGoalSetting;
  BeliefState belief;

  /// Throws ValidationError if the window is longer than two turns or two
  /// window turns share a speaker.
  void validate() const;

  /// Text of the most recent patient turn in the window, or "".
  std::string patient_text() const;
  /// Text of the most recent coach turn in the window, or "".
  std::string coach_text() const;
};

/// Empathy communication mechanisms, in canonical token order.
enum class Mechanism : std::uint8_t { kEmotionalReaction, kInterpretation, kExploration };

inline constexpr std::array<Mechanism, 3> kAllMechanisms = {
    Mechanism::kEmotionalReaction, Mechanism::kInterpretation, Mechanism::kExploration};

/// "[EMOR]", "[INTERP]", "[EXPLOR]".
std::string_view mechanism_token(Mechanism m) noexcept;
std::optional<Mechanism> parse_mechanism_token(std::string_view token) noexcept;
/// "emotional_reaction", "interpretation", "exploration".
std::string_view mechanism_name(Mechanism m) noexcept;
std::optional<Mechanism> parse_mechanism_name(std::string_view name) noexcept;

/// Small value set of mechanisms; iteration is always in canonical order.
class MechanismSet {
 public:
  constexpr MechanismSet() = default;
  MechanismSet(std::initializer_list<Mechanism> ms) {
    for (Mechanism m : ms) insert(m);
  }

  void insert(Mechanism m) { bits_ |= bit(m); }
  void erase(Mechanism m) { bits_ &= static_cast<std::uint8_t>(~bit(m)); }
  bool contains(Mechanism m) const { return (bits_ & bit(m)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const;
  std::uint8_t bits() const { return bits_; }
  static MechanismSet from_bits(std::uint8_t bits);

  std::vector<Mechanism> to_vector() const;
  /// Space-separated tokens in canonical order, e.g. "[INTERP] [EXPLOR]".
  std::string tokens() const;

  friend bool operator==(MechanismSet a, MechanismSet b) { return a.bits_ == b.bits_; }

 private:
  static constexpr std::uint8_t bit(Mechanism m) {
    return static_cast<std::uint8_t>(1U << static_cast<unsigned>(m));
  }
  std::uint8_t bits_ = 0;
};

enum class SnapshotPoint : std::uint8_t { kForward, kBackward };

std::string_view snapshot_point_name(SnapshotPoint p) noexcept;
std::optional<SnapshotPoint> parse_snapshot_point(std::string_view name) noexcept;

struct GoalSnapshot {
  BeliefState belief;
  SnapshotPoint point = SnapshotPoint::kForward;
  std::string week_id;
};

}  // namespace goalcoach
