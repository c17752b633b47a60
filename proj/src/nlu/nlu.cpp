// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/nlu/nlu.hpp"

#include <algorithm>
#include <array>

#include <spdlog/spdlog.h>

#include "goalcoach/core/errors.hpp"

namespace goalcoach {
namespace {

using Proposals = std::array<std::vector<std::string>, kSlotCount>;

bool storable(Slot s, const std::string& v) {
  try {
    BeliefState::validate_value(s, v);
    return true;
  } catch (const MalformedBelief&) {
    return false;
  }
}

Proposals group(const std::vector<SlotSpan>& spans, Diagnostics* diag) {
  Proposals out;
  for (const auto& sp : spans) {
    std::string v = sanitize_value(sp.value);
    if (v.empty() || !storable(sp.slot, v)) {
      if (diag != nullptr) {
        diag->fallbacks.push_back("nlu: dropped unusable value for " + std::string(slot_name(sp.slot)));
      }
      continue;
    }
    auto& list = out[slot_index(sp.slot)];
    const auto norm = normalize_value(v);
    const bool dup = std::any_of(list.begin(), list.end(),
                                 [&](const std::string& x) { return normalize_value(x) == norm; });
    if (!dup) list.push_back(std::move(v));
  }
  return out;
}

bool all_present(const BeliefState& b, Slot s, const std::vector<std::string>& values) {
  return std::all_of(values.begin(), values.end(),
                     [&](const std::string& v) { return b.has_value(s, v); });
}

}  // namespace

std::vector<SlotSpan> extract_slots(const std::string& utterance, const SlotTaggerBackend& tagger) {
  if (trim(utterance).empty()) throw ValidationError("utterance is empty");
  const auto tokens = tokenize(utterance);
  std::vector<std::string> words;
  words.reserve(tokens.size());
  for (const auto& t : tokens) words.push_back(t.text);
  std::vector<std::string> labels;
  try {
    labels = tagger.tag(words);
  } catch (const std::exception& e) {
    throw BackendFailure("slot tagger failed on \"" + utterance + "\": " + e.what());
  }
  if (labels.size() != words.size()) {
    throw BackendFailure("slot tagger returned " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(words.size()) + " tokens in \"" + utterance + "\"");
  }
  for (const auto& l : labels) {
    if (!bio_label_id(l)) throw BackendFailure("slot tagger emitted unknown label '" + l + "'");
  }
  return decode_bio(tokens, repair_bio(labels), utterance);
}

std::vector<Slot> detect_collisions(const BeliefState& prev, const std::vector<SlotSpan>& spans) {
  std::array<bool, kSlotCount> hit{};
  for (const auto& sp : spans) {
    if (prev.filled(sp.slot) && !prev.has_value(sp.slot, sp.value)) hit[slot_index(sp.slot)] = true;
  }
  std::vector<Slot> out;
  for (Slot s : kAllSlots) {
    if (hit[slot_index(s)]) out.push_back(s);
  }
  return out;
}

BeliefState update_belief(const BeliefState& prev, const std::vector<SlotSpan>& spans,
                          const CarryoverBackend& carry, const SessionContext& ctx,
                          Diagnostics* diag) {
  BeliefState next = prev;
  const Proposals proposed = group(spans, diag);
  for (Slot s : kAllSlots) {
    const auto& values = proposed[slot_index(s)];
    if (values.empty()) continue;
    if (!prev.filled(s)) {
      next.set(s, values);
      continue;
    }
    if (all_present(prev, s, values)) continue;

    if (diag != nullptr) diag->collisions.push_back(s);
    CarryoverQuery q{s, prev.values(s), values, ctx};
    CarryoverDecision d{s, false, 1.0};
    try {
      d = carry.decide(q);
      d.slot = s;
      d.confidence = std::clamp(d.confidence, 0.0, 1.0);
    } catch (const std::exception& e) {
      spdlog::warn("carryover failed for slot {}: {}; replacing", slot_name(s), e.what());
      if (diag != nullptr) {
        diag->fallbacks.push_back("carryover: " + std::string(e.what()) + "; replaced " +
                                  std::string(slot_name(s)));
      }
      d = CarryoverDecision{s, false, 0.0};
    }
    if (diag != nullptr) diag->carryover.push_back(d);
    if (!d.keep_previous) next.set(s, values);
  }
  next.set_turn_index(prev.turn_index() + 1);
  return next;
}

BeliefState rule_update(const BeliefState& prev, const std::vector<SlotSpan>& spans) {
  BeliefState next = prev;
  const Proposals proposed = group(spans, nullptr);
  for (Slot s : kAllSlots) {
    if (!proposed[slot_index(s)].empty()) next.set(s, proposed[slot_index(s)]);
  }
  next.set_turn_index(prev.turn_index() + 1);
  return next;
}

std::vector<DialogueTurn> context_window(const std::vector<DialogueTurn>& log,
                                         const DialogueTurn& incoming) {
  std::vector<DialogueTurn> window;
  if (!log.empty() && log.back().speaker == Speaker::kCoach && incoming.speaker == Speaker::kPatient) {
    window.push_back(log.back());
  }
  window.push_back(incoming);
  return window;
}

BeliefState fold_transcript(const std::vector<DialogueTurn>& log, const SlotTaggerBackend& tagger,
                            const CarryoverBackend& carry) {
  BeliefState belief;
  Stage stage = Stage::kGoalSetting;
  std::vector<DialogueTurn> seen;
  for (const auto& turn : log) {
    if (turn.speaker == Speaker::kPatient) {
      SessionContext ctx{context_window(seen, turn), stage, belief};
      std::vector<SlotSpan> spans;
      try {
        spans = extract_slots(turn.text, tagger);
      } catch (const BackendFailure&) {
        // the live pipeline proceeds without spans in this case as well
      }
      belief = update_belief(belief, spans, carry, ctx);
    }
    if (turn.stage) stage = *turn.stage;
    seen.push_back(turn);
  }
  return belief;
}

}  // namespace goalcoach
