// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/backends/registry.hpp"

#include <fstream>

#include "goalcoach/backends/artifact.hpp"
#include "goalcoach/backends/rule_backends.hpp"
#include "goalcoach/core/errors.hpp"

namespace goalcoach {

namespace fs = std::filesystem;

std::string_view backend_kind_name(BackendKind k) noexcept {
  switch (k) {
    case BackendKind::kSlotTagger: return "slot_tagger";
    case BackendKind::kCarryover: return "carryover";
    case BackendKind::kSeqMultitask: return "seq_multitask";
    case BackendKind::kEmotionClassifier: return "emotion_classifier";
    case BackendKind::kMechanismLabeler: return "mechanism_labeler";
    case BackendKind::kCausalLm: return "causal_lm";
    case BackendKind::kEmpathyRegressor: return "empathy_regressor";
    case BackendKind::kLmScorer: return "lm_scorer";
    case BackendKind::kParaphraser: return "paraphraser";
  }
  return "unknown";
}

std::optional<BackendKind> parse_backend_kind(std::string_view name) noexcept {
  for (BackendKind k : kAllBackendKinds) {
    if (backend_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

void BackendSet::validate() const {
  const std::pair<const void*, BackendKind> members[] = {
      {tagger.get(), BackendKind::kSlotTagger},        {carryover.get(), BackendKind::kCarryover},
      {seq.get(), BackendKind::kSeqMultitask},         {emotion.get(), BackendKind::kEmotionClassifier},
      {mechanisms.get(), BackendKind::kMechanismLabeler}, {empathy.get(), BackendKind::kCausalLm},
      {regressor.get(), BackendKind::kEmpathyRegressor}, {lm.get(), BackendKind::kLmScorer},
      {paraphraser.get(), BackendKind::kParaphraser}};
  for (const auto& [ptr, kind] : members) {
    if (ptr == nullptr) throw ConfigError("backend set lacks " + std::string(backend_kind_name(kind)));
  }
}

Json BackendSet::describe() const {
  Json j = Json::object();
  auto put = [&](const Backend* b) {
    if (b != nullptr) j[std::string(backend_kind_name(b->spec().kind))] = b->spec().identity;
  };
  put(tagger.get());
  put(carryover.get());
  put(seq.get());
  put(emotion.get());
  put(mechanisms.get());
  put(empathy.get());
  put(regressor.get());
  put(lm.get());
  put(paraphraser.get());
  return j;
}

std::shared_ptr<Backend> make_rule_backend(BackendKind kind) {
  switch (kind) {
    case BackendKind::kSlotTagger: return std::make_shared<RuleSlotTagger>();
    case BackendKind::kCarryover: return std::make_shared<RuleCarryover>();
    case BackendKind::kSeqMultitask: return std::make_shared<RuleSeqBackend>();
    case BackendKind::kEmotionClassifier: return std::make_shared<RuleEmotionClassifier>();
    case BackendKind::kMechanismLabeler: return std::make_shared<RuleMechanismLabeler>();
    case BackendKind::kCausalLm: return std::make_shared<TemplateEmpathyGenerator>();
    case BackendKind::kEmpathyRegressor: return std::make_shared<ConstantRegressor>();
    case BackendKind::kLmScorer: return std::make_shared<UniformLM>();
    case BackendKind::kParaphraser: return std::make_shared<IdentityParaphraser>();
  }
  throw ConfigError("unhandled backend kind");
}

void assign_backend(BackendSet& set, const std::shared_ptr<Backend>& b) {
  auto need = [&](auto ptr) {
    if (!ptr) throw ConfigError("backend " + b->spec().identity + " does not implement its declared kind");
    return ptr;
  };
  switch (b->spec().kind) {
    case BackendKind::kSlotTagger: set.tagger = need(std::dynamic_pointer_cast<const SlotTaggerBackend>(b)); break;
    case BackendKind::kCarryover: set.carryover = need(std::dynamic_pointer_cast<const CarryoverBackend>(b)); break;
    case BackendKind::kSeqMultitask: set.seq = need(std::dynamic_pointer_cast<const SeqBackend>(b)); break;
    case BackendKind::kEmotionClassifier: set.emotion = need(std::dynamic_pointer_cast<const ClassifierBackend>(b)); break;
    case BackendKind::kMechanismLabeler: set.mechanisms = need(std::dynamic_pointer_cast<const MultiLabelBackend>(b)); break;
    case BackendKind::kCausalLm: set.empathy = need(std::dynamic_pointer_cast<const CausalLMBackend>(b)); break;
    case BackendKind::kEmpathyRegressor: set.regressor = need(std::dynamic_pointer_cast<const RegressorBackend>(b)); break;
    case BackendKind::kLmScorer: set.lm = need(std::dynamic_pointer_cast<const LMBackend>(b)); break;
    case BackendKind::kParaphraser: set.paraphraser = need(std::dynamic_pointer_cast<const ParaphraserBackend>(b)); break;
  }
}

BackendSet rule_backends() {
  BackendSet set;
  for (BackendKind k : kAllBackendKinds) assign_backend(set, make_rule_backend(k));
  return set;
}

BackendSet load_backends(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw ConfigError("cannot open backend manifest " + manifest.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ConfigError("backend manifest: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("backend manifest must be a JSON object");
  BackendSet set = rule_backends();
  for (const auto& [name, value] : j.items()) {
    const auto kind = parse_backend_kind(name);
    if (!kind) throw ConfigError("backend manifest: unknown kind '" + name + "'");
    if (!value.is_string()) throw ConfigError("backend manifest: '" + name + "' must be a string");
    const std::string v = value.get<std::string>();
    if (v == "rule") continue;
    fs::path dir(v);
    if (dir.is_relative()) dir = manifest.parent_path() / dir;
    auto backend = load_artifact(dir);
    if (backend->spec().kind != *kind) {
      throw ConfigError("artifact " + dir.string() + " holds a " + std::string(backend_kind_name(backend->spec().kind)));
    }
    assign_backend(set, backend);
  }
  return set;
}

std::vector<std::string> registered_implementations(BackendKind) { return {"rule", "trainable"}; }

}  // namespace goalcoach
