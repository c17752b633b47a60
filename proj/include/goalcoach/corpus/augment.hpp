// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "goalcoach/backends/interfaces.hpp"
#include "goalcoach/corpus/corpus.hpp"

namespace goalcoach {

struct AugmentationRecipe {
  std::map<Slot, std::vector<std::string>> value_alternatives;
  std::shared_ptr<const ParaphraserBackend> paraphraser;  // null: no paraphrase step
  int max_variants = 2;

  /// Throws ConfigError on an empty alternative list or max_variants < 1.
  void validate() const;
  /// {"max_variants": 2, "alternatives": {"amount": ["3000 steps"], ...}}
  static AugmentationRecipe from_json(const Json& j);
  Json to_json() const;
};

/// Up to `max_variants` variants of `u`. Each variant substitutes every span
/// with a seeded choice among the slot's alternatives (spans of uncovered
/// slots keep their value), optionally paraphrases, then re-locates each value
/// by normalized token match. A variant whose values cannot all be re-located
/// is discarded; a paraphraser failure keeps the substitution-only text.
/// Throws PreconditionError when `u` has no spans.
std::vector<AnnotatedUtterance> augment(const AnnotatedUtterance& u, const AugmentationRecipe& r,
                                        std::uint64_t seed);

/// Substitution step alone: returns the utterance with span values replaced
/// (`values` aligned with u.spans()) and labels rebuilt for the new tokens.
/// Throws ValidationError if a new value does not tokenize on its own.
AnnotatedUtterance substitute_values(const AnnotatedUtterance& u, const std::vector<std::string>& values);

/// Distinct observed values per slot in the patient and coach spans of `c`.
std::map<Slot, std::vector<std::string>> harvest_alternatives(const Corpus& c);

/// Variants of every slot-bearing utterance of the corpus (originals not
/// included), each carrying its source's metadata.
std::vector<AnnotatedUtterance> augment_corpus(const Corpus& c, const AugmentationRecipe& r, std::uint64_t seed);

}  // namespace goalcoach
