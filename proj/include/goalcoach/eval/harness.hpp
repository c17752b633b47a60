// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "goalcoach/backends/registry.hpp"
#include "goalcoach/corpus/corpus.hpp"
#include "goalcoach/eval/report.hpp"
#include "goalcoach/orchestrator/session.hpp"

namespace goalcoach {

/// Tags the slot-bearing utterances of the corpus (all of them when
/// `slot_bearing_only` is false) and scores spans against the gold ones.
/// A tagger failure on one utterance counts as an empty prediction.
PRF evaluate_tagger(const Corpus& corpus, const SlotTaggerBackend& tagger,
                    std::map<Slot, PRF>* by_slot = nullptr, bool slot_bearing_only = true);

BinaryScores evaluate_carryover(const std::vector<CarryoverExample>& examples, const CarryoverBackend& carry);

/// Accuracy of the raw stage output on the corpus stage examples. Output
/// that is not a stage token counts as the previous stage.
double evaluate_stage(const Corpus& corpus, const SeqBackend& seq);

enum class BeliefUpdater { kCarryover, kLastMention };

/// Tracks beliefs through each gold week with the given NLU and compares
/// them with the gold goals: the forward point is the last patient turn that
/// moved the gold stage from goal setting to implementation, the backward
/// point the end of the week. Gold goals come from corpus.goals when present,
/// else from the annotated beliefs at those points.
std::vector<GoalPrediction> track_goals(const Corpus& corpus, const SlotTaggerBackend& tagger,
                                        const CarryoverBackend& carry,
                                        BeliefUpdater updater = BeliefUpdater::kCarryover);

/// Drives one session per week with the gold patient turns and gold coach
/// turns (as coach overrides) and returns the exported transcripts.
std::vector<TranscriptSession> simulate_corpus(const Corpus& corpus, const BackendSet& backends,
                                               const SessionConfig& base);

struct GenerationScorers {
  const LMBackend* lm = nullptr;
  const RegressorBackend* empathy = nullptr;
};

/// Scores system transcripts against a gold corpus: goal snapshots from each
/// session's close event, and each suggested coach response against the gold
/// coach turn answering the same patient turn.
EvalReport evaluate_transcripts(const std::vector<TranscriptSession>& transcripts, const Corpus& gold,
                                const GenerationScorers& scorers = {});

/// Component metrics for a backend set on a corpus (tagger, carryover,
/// stage, goal tracking).
EvalReport evaluate_components(const Corpus& corpus, const BackendSet& backends);

}  // namespace goalcoach
