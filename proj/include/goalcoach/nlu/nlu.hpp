// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "goalcoach/backends/interfaces.hpp"
#include "goalcoach/diagnostics.hpp"
#include "goalcoach/nlu/bio.hpp"

namespace goalcoach {

/// Tags the tokenized utterance and decodes spans. Orphan I- labels are
/// promoted to B-. Any backend error (including a label count mismatch) is
/// rethrown as BackendFailure naming the utterance.
std::vector<SlotSpan> extract_slots(const std::string& utterance, const SlotTaggerBackend& tagger);

/// Slots already filled in `prev` for which a span proposes a value not
/// recorded there (normalized comparison). Enumeration order.
std::vector<Slot> detect_collisions(const BeliefState& prev, const std::vector<SlotSpan>& spans);

/// One belief-update step. Per slot, proposed values (in span order) fill an
/// empty slot directly; values already present change nothing; otherwise the
/// carryover backend is asked once: keep leaves `prev`, replace installs the
/// proposed values. A failing backend falls back to replace. Values that
/// cannot be stored are dropped and reported.
BeliefState update_belief(const BeliefState& prev, const std::vector<SlotSpan>& spans,
                          const CarryoverBackend& carry, const SessionContext& ctx,
                          Diagnostics* diag = nullptr);

/// Last-mention-wins baseline: every mentioned slot takes this turn's values.
BeliefState rule_update(const BeliefState& prev, const std::vector<SlotSpan>& spans);

/// Coach turn immediately preceding the end of `log` (if any) followed by
/// `incoming`.
std::vector<DialogueTurn> context_window(const std::vector<DialogueTurn>& log,
                                         const DialogueTurn& incoming);

/// Replays extract_slots + update_belief over the patient turns of a
/// transcript. The previous stage for each patient turn is the latest stage
/// recorded on an earlier turn.
BeliefState fold_transcript(const std::vector<DialogueTurn>& log, const SlotTaggerBackend& tagger,
                            const CarryoverBackend& carry);

}  // namespace goalcoach
