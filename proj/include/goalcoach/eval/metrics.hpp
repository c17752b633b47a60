// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "goalcoach/backends/interfaces.hpp"
#include "goalcoach/nlu/bio.hpp"

namespace goalcoach {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t true_positives = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
};

/// P/R/F1 from counts. With nothing predicted and nothing gold all three are 1;
/// otherwise an empty side gives 0.
PRF prf_from_counts(std::size_t tp, std::size_t predicted, std::size_t gold);

/// Exact-match span scoring: a predicted span counts when the same utterance
/// has an unmatched gold span with the same slot and normalized value.
/// Throws ValidationError if the outer lists differ in length.
PRF slot_prf(const std::vector<std::vector<SlotSpan>>& pred, const std::vector<std::vector<SlotSpan>>& gold);
PRF slot_prf(const std::vector<SlotSpan>& pred, const std::vector<SlotSpan>& gold);
/// The same, restricted to spans of one slot.
PRF slot_prf(const std::vector<std::vector<SlotSpan>>& pred, const std::vector<std::vector<SlotSpan>>& gold,
             Slot only);

struct GoalPrediction {
  BeliefState predicted;
  BeliefState gold;
  std::string week_id;
  SnapshotPoint point = SnapshotPoint::kBackward;
};

/// Value sets equal under normalization.
bool slot_complete(const BeliefState& pred, const BeliefState& gold, Slot s);
/// Non-empty intersection under normalization.
bool slot_partial(const BeliefState& pred, const BeliefState& gold, Slot s);

struct MatchRates {
  double complete = 0.0;
  double partial = 0.0;
  std::size_t weeks = 0;  // predictions with at least one filled gold slot
};

/// Per prediction, the share of filled gold slots matched completely and
/// partially; then the mean over predictions. Predictions whose gold goal is
/// empty are skipped. Throws EmptyInput on an empty list.
MatchRates match_rates(const std::vector<GoalPrediction>& preds);

/// Rates for one slot over the predictions whose gold fills it.
std::map<Slot, MatchRates> match_rates_by_slot(const std::vector<GoalPrediction>& preds);

/// Slots (of ten) whose value sets match completely; unfilled in both counts.
int matched_slots(const BeliefState& pred, const BeliefState& gold);

/// Percentage of predictions with at least k matched slots. Throws
/// ValidationError unless 0 <= k <= 10, EmptyInput on an empty list.
double correctness_at_k(const std::vector<GoalPrediction>& preds, int k);

/// Lower-cased word tokens used by BLEU.
std::vector<std::string> bleu_tokens(std::string_view text);

/// Corpus BLEU-n (uniform weights up to n) with add-one smoothing of every
/// order above 1 and the standard brevity penalty.
double corpus_bleu(const std::vector<std::string>& candidates, const std::vector<std::string>& references, int n);

/// Mean of corpus BLEU-1..4. Throws ValidationError on a length mismatch.
double bleu_avg(const std::vector<std::string>& candidates, const std::vector<std::string>& references);

/// mean(score(candidates)) - mean(score(references)). Throws EmptyInput on
/// empty lists; scorer errors become BackendFailure.
double empathy_delta(const std::vector<std::string>& candidates, const std::vector<std::string>& references,
                     const RegressorBackend& scorer);

/// exp of the mean negative log-likelihood per token over all candidates.
/// Throws EmptyInput when there is nothing to score.
double perplexity(const std::vector<std::string>& candidates, const LMBackend& lm);

struct ABItem {
  std::string input;
  std::string system_output;
  std::string baseline_output;
};

/// Writes `path` (one blinded record per item, outputs in seeded random
/// order, two questions each) and `path` + ".key.json" for unblinding.
/// Returns the number of records written.
std::size_t export_ab(const std::vector<ABItem>& items, const std::filesystem::path& path, std::uint64_t seed);

}  // namespace goalcoach
