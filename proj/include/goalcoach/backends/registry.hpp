// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "goalcoach/backends/interfaces.hpp"

namespace goalcoach {

/// One backend per kind, as consumed by the orchestrator and the service.
struct BackendSet {
  std::shared_ptr<const SlotTaggerBackend> tagger;
  std::shared_ptr<const CarryoverBackend> carryover;
  std::shared_ptr<const SeqBackend> seq;
  std::shared_ptr<const ClassifierBackend> emotion;
  std::shared_ptr<const MultiLabelBackend> mechanisms;
  std::shared_ptr<const CausalLMBackend> empathy;
  std::shared_ptr<const RegressorBackend> regressor;
  std::shared_ptr<const LMBackend> lm;
  std::shared_ptr<const ParaphraserBackend> paraphraser;

  /// Throws ConfigError naming the first missing kind.
  void validate() const;
  /// {"slot_tagger": "<identity>", ...}
  Json describe() const;
};

std::shared_ptr<Backend> make_rule_backend(BackendKind kind);
BackendSet rule_backends();

/// Manifest: {"slot_tagger": "rule" | "<artifact dir>", ...}. Relative paths
/// resolve against the manifest's directory; absent kinds use rule backends.
BackendSet load_backends(const std::filesystem::path& manifest);

/// Installs `backend` into the matching member of `set`.
void assign_backend(BackendSet& set, const std::shared_ptr<Backend>& backend);

/// Implementation names available for a kind, e.g. {"rule", "trainable"}.
std::vector<std::string> registered_implementations(BackendKind kind);

}  // namespace goalcoach
