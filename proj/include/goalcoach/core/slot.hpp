// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace goalcoach {

/// Goal attributes tracked per week. Enumeration order is the canonical
/// rendering order everywhere (belief serialization, BIO label ids, reports).
enum class Slot : std::uint8_t {
  kActivity,
  kAmount,
  kDuration,
  kDistance,
  kTime,
  kLocation,
  kDayname,
  kDaynumber,
  kRepeatation,  // spelling kept from the annotation schema
  kScore,
};

inline constexpr std::size_t kSlotCount = 10;

inline constexpr std::array<Slot, kSlotCount> kAllSlots = {
    Slot::kActivity, Slot::kAmount,  Slot::kDuration,  Slot::kDistance,    Slot::kTime,
    Slot::kLocation, Slot::kDayname, Slot::kDaynumber, Slot::kRepeatation, Slot::kScore,
};

constexpr std::size_t slot_index(Slot s) noexcept { return static_cast<std::size_t>(s); }

std::string_view slot_name(Slot s) noexcept;
std::optional<Slot> parse_slot(std::string_view name) noexcept;

}  // namespace goalcoach
