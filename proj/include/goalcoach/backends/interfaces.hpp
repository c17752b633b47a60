// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Uniform interfaces for every learned component. Each kind has a
// deterministic rule implementation (rule_backends.hpp) and a trainable one
// (trainable.hpp). All inference methods are const and must be reentrant;
// randomness is passed in explicitly through DecodeOptions::seed.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "goalcoach/core/dialogue.hpp"
#include "goalcoach/core/emotion.hpp"
#include "goalcoach/core/json_io.hpp"

namespace goalcoach {

enum class BackendKind : std::uint8_t {
  kSlotTagger,
  kCarryover,
  kSeqMultitask,
  kEmotionClassifier,
  kMechanismLabeler,
  kCausalLm,
  kEmpathyRegressor,
  kLmScorer,
  kParaphraser,
};

inline constexpr std::array<BackendKind, 9> kAllBackendKinds = {
    BackendKind::kSlotTagger,       BackendKind::kCarryover,        BackendKind::kSeqMultitask,
    BackendKind::kEmotionClassifier, BackendKind::kMechanismLabeler, BackendKind::kCausalLm,
    BackendKind::kEmpathyRegressor, BackendKind::kLmScorer,         BackendKind::kParaphraser,
};

std::string_view backend_kind_name(BackendKind k) noexcept;
std::optional<BackendKind> parse_backend_kind(std::string_view name) noexcept;

struct BackendSpec {
  BackendKind kind = BackendKind::kSlotTagger;
  std::string identity;
  Json config = Json::object();
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual const BackendSpec& spec() const = 0;
};

struct DecodeOptions {
  bool sample = false;  // false: deterministic (greedy) decoding
  int top_k = 50;
  double top_p = 0.95;
  int max_tokens = 128;
  std::uint64_t seed = 0;
};

class SlotTaggerBackend : public Backend {
 public:
  /// One BIO label ("O", "B-activity", ...) per input token.
  virtual std::vector<std::string> tag(const std::vector<std::string>& tokens) const = 0;
};

struct CarryoverQuery {
  Slot slot = Slot::kActivity;
  std::vector<std::string> previous_values;
  std::vector<std::string> proposed_values;
  SessionContext context;  // window ends with the current patient message
};

struct CarryoverDecision {
  Slot slot = Slot::kActivity;
  bool keep_previous = false;
  double confidence = 1.0;
};

class CarryoverBackend : public Backend {
 public:
  virtual CarryoverDecision decide(const CarryoverQuery& query) const = 0;
};

/// Text-to-text model serving both stage prediction and response generation;
/// the task is selected by the input's prefix.
class SeqBackend : public Backend {
 public:
  virtual std::string generate(const std::string& input, const DecodeOptions& opts) const = 0;
};

class ClassifierBackend : public Backend {
 public:
  virtual const std::shared_ptr<const EmotionVocabulary>& vocabulary() const = 0;
  /// Distribution aligned with vocabulary().labels().
  virtual std::vector<double> predict(const std::string& utterance) const = 0;
};

class MultiLabelBackend : public Backend {
 public:
  virtual MechanismSet label(const std::string& response) const = 0;
};

class CausalLMBackend : public Backend {
 public:
  /// Continuation of `prompt` (the prompt itself is not echoed).
  virtual std::string complete(const std::string& prompt, const DecodeOptions& opts) const = 0;
};

class RegressorBackend : public Backend {
 public:
  virtual double score(const std::string& text) const = 0;
};

struct LogLikelihood {
  double log_prob = 0.0;  // natural log
  std::size_t tokens = 0;
};

class LMBackend : public Backend {
 public:
  virtual LogLikelihood log_likelihood(const std::string& text) const = 0;
};

class ParaphraserBackend : public Backend {
 public:
  /// Throws ParaphraserFailure when no paraphrase can be produced.
  virtual std::string paraphrase(const std::string& text, std::uint64_t seed) const = 0;
};

}  // namespace goalcoach
