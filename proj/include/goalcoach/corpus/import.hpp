// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// One-way import of a released health-coaching dataset into the canonical
// corpus format. Every *.jsonl file below the dataset directory is read;
// each line is one utterance:
//   {"week": ..., "turn": n, "speaker": "patient"|"coach", "text": ...,
//    "stage": ..., "phase": ..., "acts": [...],
//    "slots": [{"slot": "amount", "value": "3000 steps",
//               "char_start": 12, "char_end": 22}]}
// "week_id", "turn_index" and "role" are accepted as aliases. Character
// offsets are optional; without them the value is located by token match.
// Goal records ({"week", "point", "slots": {...}}) may sit in goals.jsonl.

#include <filesystem>

#include "goalcoach/corpus/corpus.hpp"

namespace goalcoach {

struct ImportStats {
  std::size_t utterances = 0;
  std::size_t spans = 0;
  std::size_t unlocated = 0;  // slot values dropped because they were not found in the text
};

/// Throws SchemaError with file and line on malformed records.
Corpus import_release(const std::filesystem::path& dataset1, const std::filesystem::path& dataset2,
                      ImportStats* stats = nullptr);

}  // namespace goalcoach
