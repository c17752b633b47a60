// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Canonical corpus format. A corpus directory holds
//   utterances.jsonl  one record per line:
//     {"week": "w01", "dataset": 1, "turn": 0, "speaker": "patient",
//      "text": "...", "stage": "goal_setting", "phase": "...", "acts": [...],
//      "spans": [{"slot": "activity", "start": 3, "end": 3}],
//      "belief": {"slots": {...}}}
//   goals.jsonl       {"week": "w01", "point": "forward", "belief": {...}}
// Span indices are inclusive token positions under tokenize(). "phase",
// "acts" and "belief" are optional; "stage" is required for dataset 2.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "goalcoach/backends/trainable.hpp"
#include "goalcoach/core/dialogue.hpp"
#include "goalcoach/nlu/bio.hpp"

namespace goalcoach {

struct AnnotatedUtterance {
  std::string week_id;
  int dataset = 1;
  int turn_index = 0;
  Speaker speaker = Speaker::kPatient;
  std::string text;
  std::vector<std::string> tokens;
  std::vector<std::string> bio_labels;
  std::optional<Stage> stage;
  std::optional<std::string> phase;
  std::vector<std::string> acts;
  std::optional<BeliefState> belief;  // annotated state after this turn

  /// Builds tokens and labels from token-index spans. Throws SchemaError on
  /// overlapping or out-of-range spans.
  static AnnotatedUtterance make(std::string text, const std::vector<SlotSpan>& spans);
  std::vector<SlotSpan> spans() const;
  bool has_spans() const;
};

struct GoldGoal {
  std::string week_id;
  SnapshotPoint point = SnapshotPoint::kForward;
  BeliefState belief;
};

struct Week {
  std::string week_id;
  int dataset = 1;
  std::vector<AnnotatedUtterance> turns;
};

struct Corpus {
  std::vector<Week> weeks;
  std::vector<GoldGoal> goals;

  std::size_t utterance_count() const;
  const Week* find_week(const std::string& id) const;
  std::optional<GoldGoal> goal(const std::string& week_id, SnapshotPoint point) const;
};

Json utterance_to_json(const AnnotatedUtterance& u);
/// Throws SchemaError (without line number; callers add it).
AnnotatedUtterance utterance_from_json(const Json& j);

/// Accepts a corpus directory or a single utterances file.
Corpus load_corpus(const std::filesystem::path& path);
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

struct CorpusSplit {
  Corpus train;
  Corpus dev;
  Corpus test;
};

/// Dataset 2 is the test set; dataset 1 weeks are ordered by a hash of their
/// id and the first `dev_fraction` of them (rounded) become the dev set.
CorpusSplit split_corpus(const Corpus& corpus, double dev_fraction = 0.1);

/// Token spans for (slot, value) pairs located in `text`: the first
/// case-insensitive token-aligned occurrence not already used. Values that
/// cannot be located are skipped and returned in `missing`.
std::vector<SlotSpan> locate_values(std::string_view text, const std::vector<std::pair<Slot, std::string>>& values,
                                    std::vector<std::pair<Slot, std::string>>* missing = nullptr);

/// Replaces each span of `text` by "[slot]". Throws SchemaError on overlap.
std::string delexicalize_text(std::string_view text, const std::vector<SlotSpan>& spans);
/// Coach turns get delexicalized text and no spans; other turns unchanged.
Corpus delexicalize_targets(const Corpus& corpus);

// ---------------------------------------------------------------------------
// training views

/// Utterances with at least one span (all, if `slot_bearing_only` is false).
std::vector<BIOSequence> tagger_examples(const Corpus& corpus, bool slot_bearing_only = true);

/// Collisions between the annotated state before a patient turn and the
/// turn's spans, labelled keep or replace from the annotated state after it.
/// Needs belief annotations; unresolvable cases are skipped.
std::vector<CarryoverExample> mine_collisions(const Corpus& corpus);

/// Stage and response examples for each patient turn answered by a coach
/// turn. Targets use gold stages and delexicalized coach text. Throws
/// SchemaError when a turn lacks a stage label.
std::vector<SeqExample> seq_examples(const Corpus& corpus);

/// Annotated belief after each turn, or a last-mention fold of patient spans
/// when the corpus has no belief annotations.
std::vector<BeliefState> gold_beliefs(const Week& week);

}  // namespace goalcoach
