// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/core/slot.hpp"

namespace goalcoach {
namespace {

constexpr std::array<std::string_view, kSlotCount> kSlotNames = {
    "activity", "amount",  "duration",  "distance",    "time",
    "location", "dayname", "daynumber", "repeatation", "score",
};

}  // namespace

std::string_view slot_name(Slot s) noexcept { return kSlotNames[slot_index(s)]; }

std::optional<Slot> parse_slot(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kSlotCount; ++i) {
    if (kSlotNames[i] == name) return kAllSlots[i];
  }
  return std::nullopt;
}

}  // namespace goalcoach
