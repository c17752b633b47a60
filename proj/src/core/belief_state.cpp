// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/core/belief_state.hpp"

#include <algorithm>
#include <charconv>

#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"

namespace goalcoach {

bool BeliefState::empty() const {
  return std::all_of(slots_.begin(), slots_.end(), [](const auto& v) { return v.empty(); });
}

std::size_t BeliefState::filled_count() const {
  return static_cast<std::size_t>(
      std::count_if(slots_.begin(), slots_.end(), [](const auto& v) { return !v.empty(); }));
}

void BeliefState::validate_value(Slot s, std::string_view value) {
  if (trim(value).empty()) {
    throw MalformedBelief("empty value for slot '" + std::string(slot_name(s)) + "'");
  }
  if (value.find_first_of(";|=\n\r") != std::string_view::npos) {
    throw MalformedBelief("value '" + std::string(value) + "' contains a reserved delimiter");
  }
  if (s == Slot::kScore) {
    const std::string v = trim(value);
    int n = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec == std::errc() && ptr == v.data() + v.size() && (n < 1 || n > 10)) {
      throw MalformedBelief("score value " + v + " outside [1,10]");
    }
  }
}

bool BeliefState::add(Slot s, std::string_view value) {
  validate_value(s, value);
  if (has_value(s, value)) return false;
  slots_[slot_index(s)].push_back(trim(value));
  return true;
}

void BeliefState::set(Slot s, const std::vector<std::string>& values) {
  std::vector<std::string> previous = std::move(slots_[slot_index(s)]);
  slots_[slot_index(s)].clear();
  try {
    for (const auto& v : values) add(s, v);
  } catch (...) {
    slots_[slot_index(s)] = std::move(previous);
    throw;
  }
}

bool BeliefState::has_value(Slot s, std::string_view value) const {
  const std::string needle = normalize_value(value);
  const auto& vs = slots_[slot_index(s)];
  return std::any_of(vs.begin(), vs.end(),
                     [&](const std::string& v) { return normalize_value(v) == needle; });
}

std::string serialize_belief(const BeliefState& b) {
  std::string out;
  for (Slot s : kAllSlots) {
    if (!b.filled(s)) continue;
    if (!out.empty()) out += "; ";
    out += slot_name(s);
    out += '=';
    out += join(b.values(s), "|");
  }
  return out;
}

BeliefState parse_belief(std::string_view text) {
  BeliefState b;
  if (trim(text).empty()) return b;
  std::array<bool, kSlotCount> seen{};
  for (const std::string& raw_field : split(text, ';')) {
    const std::string field = trim(raw_field);
    const auto eq = field.find('=');
    if (eq == std::string::npos) {
      throw MalformedBelief("belief field '" + field + "' has no '='");
    }
    const std::string name = trim(std::string_view(field).substr(0, eq));
    const auto slot = parse_slot(name);
    if (!slot) throw MalformedBelief("unknown slot '" + name + "'");
    if (seen[slot_index(*slot)]) throw MalformedBelief("slot '" + name + "' repeated");
    seen[slot_index(*slot)] = true;
    for (const std::string& v : split(std::string_view(field).substr(eq + 1), '|')) {
      const std::string value = trim(v);
      if (value.empty()) throw MalformedBelief("empty value for slot '" + name + "'");
      if (!b.add(*slot, value)) {
        throw MalformedBelief("duplicate value '" + value + "' for slot '" + name + "'");
      }
    }
  }
  return b;
}

std::string sanitize_value(std::string_view raw) {
  std::string tmp(raw);
  for (char& c : tmp) {
    if (c == ';' || c == '|' || c == '=' || c == '\n' || c == '\r') c = ' ';
  }
  std::string out;
  bool space = false;
  for (char c : trim(tmp)) {
    if (c == ' ' || c == '\t') {
      space = true;
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace goalcoach
