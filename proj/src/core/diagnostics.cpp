// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/diagnostics.hpp"

namespace goalcoach {

Json diagnostics_to_json(const Diagnostics& d) {
  Json collisions = Json::array();
  for (Slot s : d.collisions) collisions.push_back(std::string(slot_name(s)));
  Json carry = Json::array();
  for (const auto& c : d.carryover) {
    carry.push_back({{"slot", std::string(slot_name(c.slot))},
                     {"keep_previous", c.keep_previous},
                     {"confidence", c.confidence}});
  }
  Json unfilled = Json::array();
  for (Slot s : d.unfilled_placeholders) unfilled.push_back(std::string(slot_name(s)));
  return Json{{"collisions", collisions},
              {"carryover", carry},
              {"fallbacks", d.fallbacks},
              {"unfilled_placeholders", unfilled}};
}

}  // namespace goalcoach
