// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Builds the training view each backend kind needs and trains it.
//
//   slot_tagger        corpus train split (+ augmentation variants)
//   carryover          collisions mined from the corpus train split
//   seq_multitask      stage and delexicalized response pairs
//   emotion_classifier silver empathy records (utterance, emotion label)
//   mechanism_labeler  EPITOME responses with level > 0 per mechanism
//   causal_lm          silver empathy records, then the few-shot set
//   empathy_regressor  EPITOME responses with their mean level
//   lm_scorer          plain sentences (corpus texts when none are given)
//   paraphraser        aligned paraphrase pairs
//
// Metrics are computed on the dev split (corpus kinds) or on a held-out
// tenth of the examples (the others).

#include <memory>
#include <optional>
#include <vector>

#include "goalcoach/backends/recipe.hpp"
#include "goalcoach/corpus/augment.hpp"
#include "goalcoach/corpus/corpus.hpp"
#include "goalcoach/corpus/empathy.hpp"

namespace goalcoach {

struct TrainInputs {
  const Corpus* corpus = nullptr;
  double dev_fraction = 0.1;
  std::optional<AugmentationRecipe> augmentation;
  std::vector<SilverSample> silver;
  std::vector<EmpathySample> few_shot;
  std::optional<EpitomeData> epitome;
  std::vector<std::string> sentences;
  std::vector<ParaphrasePair> pairs;
};

struct TrainResult {
  std::shared_ptr<Backend> backend;
  Json metrics = Json::object();
};

/// Throws ConfigError when the inputs for `kind` are missing and
/// DataTooSmall when they are below the recipe's floor.
TrainResult train_backend(BackendKind kind, const TrainInputs& inputs, const TrainRecipe& recipe);

}  // namespace goalcoach
