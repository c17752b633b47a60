// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Brute-force reference implementations of the evaluation metrics, written
// directly from their definitions and kept apart from src/eval.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "goalcoach/core/text.hpp"
#include "goalcoach/corpus/corpus.hpp"
#include "goalcoach/eval/metrics.hpp"

namespace goalcoach::oracle {

inline std::set<std::string> value_set(const BeliefState& b, Slot s) {
  std::set<std::string> out;
  for (const auto& v : b.values(s)) out.insert(normalize_value(v));
  return out;
}

inline int matched(const BeliefState& p, const BeliefState& g) {
  int n = 0;
  for (Slot s : kAllSlots) n += value_set(p, s) == value_set(g, s);
  return n;
}

inline double correctness(const std::vector<GoalPrediction>& preds, int k) {
  int hits = 0;
  for (const auto& p : preds) hits += matched(p.predicted, p.gold) >= k;
  return 100.0 * hits / static_cast<double>(preds.size());
}

/// (complete, partial, weeks)
inline std::tuple<double, double, std::size_t> match(const std::vector<GoalPrediction>& preds) {
  double complete = 0.0;
  double partial = 0.0;
  std::size_t weeks = 0;
  for (const auto& p : preds) {
    int filled = 0;
    int c = 0;
    int q = 0;
    for (Slot s : kAllSlots) {
      const auto g = value_set(p.gold, s);
      if (g.empty()) continue;
      ++filled;
      const auto pr = value_set(p.predicted, s);
      c += pr == g;
      bool any = false;
      for (const auto& v : pr) any = any || g.count(v) > 0;
      q += any;
    }
    if (filled == 0) continue;
    ++weeks;
    complete += static_cast<double>(c) / filled;
    partial += static_cast<double>(q) / filled;
  }
  if (weeks == 0) return {0.0, 0.0, 0};
  return {complete / static_cast<double>(weeks), partial / static_cast<double>(weeks), weeks};
}

/// (tp, predicted, gold) by multiset intersection per utterance.
inline std::tuple<std::size_t, std::size_t, std::size_t> span_counts(const std::vector<std::vector<SlotSpan>>& pred,
                                                                     const std::vector<std::vector<SlotSpan>>& gold) {
  std::size_t tp = 0;
  std::size_t np = 0;
  std::size_t ng = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    std::map<std::pair<Slot, std::string>, int> a;
    std::map<std::pair<Slot, std::string>, int> b;
    for (const auto& s : pred[i]) ++a[{s.slot, normalize_value(s.value)}];
    for (const auto& s : gold[i]) ++b[{s.slot, normalize_value(s.value)}];
    for (const auto& [k, n] : a) {
      const auto it = b.find(k);
      if (it != b.end()) tp += static_cast<std::size_t>(std::min(n, it->second));
    }
    np += pred[i].size();
    ng += gold[i].size();
  }
  return {tp, np, ng};
}

/// Random goal pairs over a small value pool so that matches are common.
inline GoalPrediction random_goal_pair(std::mt19937_64& rng) {
  static const std::vector<std::string> pool = {"walk", "Walk ", "run", "3000 steps", "Monday", "tuesday", "7am", "5"};
  auto draw = [&](BeliefState& b, Slot s) {
    const int n = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int i = 0; i < n; ++i) {
      b.add(s, s == Slot::kScore ? std::to_string(std::uniform_int_distribution<int>(1, 3)(rng))
                                 : pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
    }
  };
  GoalPrediction p;
  for (Slot s : kAllSlots) {
    draw(p.gold, s);
    if (std::bernoulli_distribution(0.5)(rng)) {
      p.predicted.set(s, p.gold.values(s));
    } else {
      draw(p.predicted, s);
    }
  }
  return p;
}

inline std::vector<SlotSpan> random_spans(std::mt19937_64& rng) {
  static const std::vector<std::string> pool = {"walk", "WALK", "3000 steps", "monday", "7am"};
  std::vector<SlotSpan> out;
  const int n = std::uniform_int_distribution<int>(0, 4)(rng);
  for (int i = 0; i < n; ++i) {
    out.push_back({kAllSlots[std::uniform_int_distribution<std::size_t>(0, 3)(rng)],
                   pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)], i, i});
  }
  return out;
}

// Independent statement of which payloads the codec must accept.
inline bool payload_ok(const std::string& s) {
  bool blank = true;
  for (char c : s) blank = blank && (c == ' ' || c == '\t');
  if (blank) return false;
  if (s.find('\n') != std::string::npos || s.find('\r') != std::string::npos) return false;
  for (const char* bad : {"<|bos|>", "<|sep|>", "<|eos|>", "[EMOR]", "[INTERP]", "[EXPLOR]"}) {
    if (s.find(bad) != std::string::npos) return false;
  }
  return true;
}

inline std::string fuzz_text(std::mt19937_64& rng) {
  static const std::vector<std::string> atoms = {
      "a", "Z", "7", " ", "  ", "<", "|", ">", "<|", "|>", "[", "]", "[EMO", "EMOR]", "<|sep", "sep|>",
      "'", "?", "!", ".", ",", "\t", "\xc3\xa9", "\xe2\x80\x94", "\n", "<|eos|>", "[INTERP]", "<|bos|>"};
  std::uniform_int_distribution<int> len(0, 14);
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
  std::string out;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) out += atoms[pick(rng)];
  return out;
}

// Rebuilds the text of `u` with span i replaced by values[i], from character
// offsets alone.
inline std::string splice(const AnnotatedUtterance& u, const std::vector<std::string>& values) {
  const auto toks = tokenize(u.text);
  const auto spans = u.spans();
  std::string out;
  std::size_t last = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const std::size_t b = toks[static_cast<std::size_t>(spans[i].token_start)].begin;
    const std::size_t e = toks[static_cast<std::size_t>(spans[i].token_end)].end;
    out += u.text.substr(last, b - last) + values[i];
    last = e;
  }
  return out + u.text.substr(last);
}

}  // namespace goalcoach::oracle
