// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "goalcoach/backends/interfaces.hpp"

namespace goalcoach {

/// Per-turn record of everything that did not go down the happy path.
struct Diagnostics {
  std::vector<Slot> collisions;
  std::vector<CarryoverDecision> carryover;
  std::vector<std::string> fallbacks;  // human-readable, one per degraded step
  std::vector<Slot> unfilled_placeholders;
};

Json diagnostics_to_json(const Diagnostics& d);

}  // namespace goalcoach
