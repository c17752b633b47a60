// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "goalcoach/core/slot.hpp"

namespace goalcoach {

/// Goal attributes inferred up to a turn: each slot holds zero or more
/// recorded values. Values are kept in their surface form; comparisons use
/// `normalize_value`.
///
/// Invariants: no empty values, no duplicates under normalization, no
/// reserved delimiter characters (`;`, `|`, `=`, newline), and numeric
/// `score` values lie in [1, 10].
class BeliefState {
 public:
  BeliefState() = default;

  const std::vector<std::string>& values(Slot s) const { return slots_[slot_index(s)]; }
  bool filled(Slot s) const { return !slots_[slot_index(s)].empty(); }
  bool empty() const;
  std::size_t filled_count() const;

  /// Appends `value` unless an equal value (normalized) is already present.
  /// Returns true if the value was added. Throws MalformedBelief on invalid
  /// values.
  bool add(Slot s, std::string_view value);
  void set(Slot s, const std::vector<std::string>& values);
  void clear(Slot s) { slots_[slot_index(s)].clear(); }

  /// True if `value` is recorded for `s` under normalization.
  bool has_value(Slot s, std::string_view value) const;

  int turn_index() const { return turn_index_; }
  void set_turn_index(int t) { turn_index_ = t; }

  /// Slot values only; turn_index is bookkeeping and not part of identity.
  friend bool operator==(const BeliefState& a, const BeliefState& b) { return a.slots_ == b.slots_; }

  /// Rejects values that would break the textual form.
  static void validate_value(Slot s, std::string_view value);

 private:
  std::array<std::vector<std::string>, kSlotCount> slots_{};
  int turn_index_ = 0;
};

/// "slot=v1|v2; slot=v3" with slots in enumeration order; "" when empty.
std::string serialize_belief(const BeliefState& b);

/// Inverse of serialize_belief. Throws MalformedBelief on unknown slots,
/// missing `=`, empty values, duplicate slot keys or invalid values.
BeliefState parse_belief(std::string_view text);

/// Replaces reserved delimiter characters with spaces and collapses whitespace
/// so arbitrary extracted text can be stored.
std::string sanitize_value(std::string_view raw);

}  // namespace goalcoach
