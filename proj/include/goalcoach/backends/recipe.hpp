// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "goalcoach/backends/interfaces.hpp"
#include "goalcoach/backends/linear_model.hpp"

namespace goalcoach {

struct TrainRecipe {
  BackendKind kind = BackendKind::kSlotTagger;
  std::string family = "transformer";
  std::string model;  // reference model family, informational
  int epochs = 5;
  double learning_rate = 5e-5;
  int batch_size = 32;
  int warmup_steps = 0;
  int max_length = 50;
  std::optional<int> top_k;
  std::optional<double> top_p;
  int few_shot_epochs = 0;
  int few_shot_samples = 0;
  double weight_decay = 0.0;
  int dim_bits = 18;
  int min_examples = 10;
  std::uint64_t seed = 13;
  Json sweeps = Json::object();  // optional hyperparameter grids, not run by default

  /// Throws ConfigError on non-positive epochs, batch size, length or lr.
  void validate() const;
  FitOptions fit_options() const;
  DecodeOptions decode_options() const;

  Json to_json() const;
  /// Missing fields take the defaults of default_recipe(kind).
  static TrainRecipe from_json(const Json& j, std::optional<BackendKind> kind = std::nullopt);
};

/// Published hyperparameters, bold picks of each grid.
TrainRecipe default_recipe(BackendKind kind);

/// Loads a recipe file. The file holds either one recipe object (with a
/// "kind" field) or an object mapping kind names to recipes.
TrainRecipe load_recipe(const std::string& path, BackendKind kind);

}  // namespace goalcoach
