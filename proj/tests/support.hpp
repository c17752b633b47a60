// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "goalcoach/core/belief_state.hpp"
#include "goalcoach/core/json_io.hpp"

namespace goalcoach::testing {

inline std::string data_path(const std::string& name) { return std::string(GOALCOACH_TEST_DATA) + "/" + name; }

inline Json read_json(const std::string& path) {
  std::ifstream in(path);
  return Json::parse(in);
}

/// A few words of plain lower/upper-case letters and digits.
inline std::string random_phrase(std::mt19937_64& rng, int max_words = 3) {
  static const char kChars[] = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJ0123456789";
  std::uniform_int_distribution<int> words(1, max_words);
  std::uniform_int_distribution<int> len(1, 7);
  std::uniform_int_distribution<int> ch(0, static_cast<int>(sizeof(kChars)) - 2);
  std::string out;
  const int n = words(rng);
  for (int w = 0; w < n; ++w) {
    if (w) out += ' ';
    const int l = len(rng);
    for (int i = 0; i < l; ++i) out += kChars[ch(rng)];
  }
  return out;
}

inline BeliefState random_belief(std::mt19937_64& rng, double fill = 0.5) {
  BeliefState b;
  std::bernoulli_distribution filled(fill);
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_int_distribution<int> score(1, 10);
  for (Slot s : kAllSlots) {
    if (!filled(rng)) continue;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      b.add(s, s == Slot::kScore ? std::to_string(score(rng)) : random_phrase(rng));
    }
  }
  return b;
}

}  // namespace goalcoach::testing
