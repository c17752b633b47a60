// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Empathetic-dialogue corpus preparation.
//
// EmpatheticDialogues (ED) release: <dir>/{train,valid,test}.csv with columns
//   conv_id, utterance_idx, context, prompt, speaker_idx, utterance, ...
// Consecutive utterances of one conversation form (utterance, response)
// pairs; "context" is the emotion label.
//
// EPITOME release: <dir>/{emotional-reactions,interpretations,explorations}-reddit.csv
// with columns sp_id, rp_id, seeker_post, response_post, level, rationales.

#include <filesystem>
#include <string>
#include <vector>

#include "goalcoach/backends/interfaces.hpp"
#include "goalcoach/backends/trainable.hpp"
#include "goalcoach/nlg/emp.hpp"

namespace goalcoach {

struct SilverSample {
  EmpathySample sample;
  std::string emotion;
  std::string split;  // "train", "dev" or "test"
};

struct EdPair {
  std::string conv_id;
  std::string utterance;
  std::string response;
  std::string emotion;
};

/// Pairs from one ED split file. Throws SchemaError (with line) on records
/// with fewer than six fields or a blank conv_id.
std::vector<EdPair> read_ed_pairs(const std::filesystem::path& file);

struct EpitomeData {
  std::vector<MechanismExample> mechanisms;  // response -> mechanisms with level > 0
  std::vector<ScoredText> levels;            // response -> mean level over the three files
};

/// Throws SchemaError on a record whose level is not 0, 1 or 2.
EpitomeData read_epitome(const std::filesystem::path& dir);

struct EmpathyCorpus {
  std::vector<SilverSample> samples;
  EpitomeData epitome;
  std::size_t dropped = 0;  // ED pairs with an empty silver label set

  std::vector<EmpathySample> split(const std::string& name) const;
};

/// Silver-labels every ED response with `labeler`; empty sets are dropped.
/// Missing split files contribute nothing.
EmpathyCorpus build_empathy_corpus(const std::filesystem::path& ed_dir, const std::filesystem::path& epitome_dir,
                                   const MultiLabelBackend& labeler);

/// One record per line: {"utterance", "response", "mechanisms", "emotion_label", "split"}.
void write_silver(const std::vector<SilverSample>& samples, const std::filesystem::path& file);
std::vector<SilverSample> read_silver(const std::filesystem::path& file);

/// Few-shot set: lines of {"utterance", "response", "mechanisms"}.
std::vector<EmpathySample> read_few_shot(const std::filesystem::path& file);

}  // namespace goalcoach
