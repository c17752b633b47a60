// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/backends/recipe.hpp"

#include <fstream>

#include "goalcoach/core/errors.hpp"

namespace goalcoach {

TrainRecipe default_recipe(BackendKind kind) {
  TrainRecipe r;
  r.kind = kind;
  switch (kind) {
    case BackendKind::kSlotTagger:
      r.model = "bert-base";
      r.epochs = 5;
      r.learning_rate = 5e-5;
      r.batch_size = 32;
      r.max_length = 50;
      r.min_examples = 50;
      r.sweeps = {{"epochs", {5, 7, 10}}, {"learning_rate", {2e-5, 5e-5}}, {"batch_size", {32, 64}}};
      break;
    case BackendKind::kCarryover:
      r.model = "bert-base";
      r.epochs = 7;
      r.learning_rate = 5e-5;
      r.batch_size = 16;
      r.max_length = 96;
      r.sweeps = {{"epochs", {5, 7, 10}}, {"learning_rate", {2e-5, 5e-5}}, {"batch_size", {16, 32, 64}}};
      break;
    case BackendKind::kSeqMultitask:
      r.model = "t5-base";
      r.epochs = 10;
      r.learning_rate = 1e-4;
      r.warmup_steps = 400;
      r.batch_size = 64;
      r.max_length = 128;
      r.top_k = 50;
      r.top_p = 0.95;
      break;
    case BackendKind::kCausalLm:
      r.model = "gpt2";
      r.epochs = 10;
      r.learning_rate = 1e-4;
      r.warmup_steps = 400;
      r.batch_size = 32;
      r.max_length = 96;
      r.top_k = 50;
      r.top_p = 0.95;
      r.few_shot_epochs = 1;
      r.few_shot_samples = 64;
      break;
    case BackendKind::kEmotionClassifier:
    case BackendKind::kMechanismLabeler:
    case BackendKind::kEmpathyRegressor:
      r.model = "bert-base";
      r.epochs = 8;
      r.learning_rate = 4e-5;
      r.batch_size = 32;
      r.max_length = 96;
      break;
    case BackendKind::kLmScorer:
    case BackendKind::kParaphraser:
      r.model = "ngram";
      r.epochs = 1;
      r.learning_rate = 1.0;
      r.batch_size = 1;
      r.max_length = 96;
      break;
  }
  return r;
}

void TrainRecipe::validate() const {
  if (epochs < 1) throw ConfigError("recipe: epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("recipe: batch_size must be >= 1");
  if (max_length < 1) throw ConfigError("recipe: max_length must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("recipe: learning_rate must be > 0");
  if (warmup_steps < 0) throw ConfigError("recipe: warmup_steps must be >= 0");
  if (dim_bits < 8 || dim_bits > 24) throw ConfigError("recipe: dim_bits must lie in [8, 24]");
  if (top_k && *top_k < 0) throw ConfigError("recipe: top_k must be >= 0");
  if (top_p && !(*top_p > 0.0 && *top_p <= 1.0)) throw ConfigError("recipe: top_p must lie in (0, 1]");
  if (few_shot_epochs < 0 || few_shot_samples < 0) throw ConfigError("recipe: few-shot fields must be >= 0");
}

FitOptions TrainRecipe::fit_options() const {
  FitOptions o;
  o.epochs = epochs;
  o.learning_rate = learning_rate;
  o.batch_size = batch_size;
  o.warmup_steps = warmup_steps;
  o.weight_decay = weight_decay;
  o.seed = seed;
  return o;
}

DecodeOptions TrainRecipe::decode_options() const {
  DecodeOptions o;
  o.sample = top_k.has_value() || top_p.has_value();
  if (top_k) o.top_k = *top_k;
  if (top_p) o.top_p = *top_p;
  o.max_tokens = max_length;
  o.seed = seed;
  return o;
}

Json TrainRecipe::to_json() const {
  Json j = {{"kind", backend_kind_name(kind)},
            {"family", family},
            {"model", model},
            {"epochs", epochs},
            {"learning_rate", learning_rate},
            {"batch_size", batch_size},
            {"warmup_steps", warmup_steps},
            {"max_length", max_length},
            {"few_shot_epochs", few_shot_epochs},
            {"few_shot_samples", few_shot_samples},
            {"weight_decay", weight_decay},
            {"dim_bits", dim_bits},
            {"min_examples", min_examples},
            {"seed", seed},
            {"sweeps", sweeps}};
  if (top_k) j["top_k"] = *top_k;
  if (top_p) j["top_p"] = *top_p;
  return j;
}

TrainRecipe TrainRecipe::from_json(const Json& j, std::optional<BackendKind> kind) {
  if (!j.is_object()) throw ConfigError("recipe must be a JSON object");
  if (j.contains("kind")) {
    auto k = parse_backend_kind(j.at("kind").get<std::string>());
    if (!k) throw ConfigError("recipe: unknown kind " + j.at("kind").dump());
    if (kind && *kind != *k) throw ConfigError("recipe kind does not match the requested backend");
    kind = k;
  }
  if (!kind) throw ConfigError("recipe: missing kind");
  TrainRecipe r = default_recipe(*kind);
  try {
    r.family = j.value("family", r.family);
    r.model = j.value("model", r.model);
    r.epochs = j.value("epochs", r.epochs);
    r.learning_rate = j.value("learning_rate", r.learning_rate);
    r.batch_size = j.value("batch_size", r.batch_size);
    r.warmup_steps = j.value("warmup_steps", r.warmup_steps);
    r.max_length = j.value("max_length", r.max_length);
    r.few_shot_epochs = j.value("few_shot_epochs", r.few_shot_epochs);
    r.few_shot_samples = j.value("few_shot_samples", r.few_shot_samples);
    r.weight_decay = j.value("weight_decay", r.weight_decay);
    r.dim_bits = j.value("dim_bits", r.dim_bits);
    r.min_examples = j.value("min_examples", r.min_examples);
    r.seed = j.value("seed", r.seed);
    if (j.contains("top_k")) r.top_k = j.at("top_k").get<int>();
    if (j.contains("top_p")) r.top_p = j.at("top_p").get<double>();
    if (j.contains("sweeps")) r.sweeps = j.at("sweeps");
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("recipe: ") + e.what());
  }
  r.validate();
  return r;
}

TrainRecipe load_recipe(const std::string& path, BackendKind kind) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open recipe " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ConfigError("recipe " + path + ": " + e.what());
  }
  if (j.is_object() && !j.contains("kind")) {
    const std::string name(backend_kind_name(kind));
    if (!j.contains(name)) throw ConfigError("recipe " + path + " has no entry for " + name);
    return TrainRecipe::from_json(j.at(name), kind);
  }
  return TrainRecipe::from_json(j, kind);
}

}  // namespace goalcoach
