// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Deterministic, seed-free implementations of every backend kind. They serve
// as test doubles, as the default pipeline configuration, and as the SF+Rule
// baseline.

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "goalcoach/backends/interfaces.hpp"

namespace goalcoach {

/// Pattern tagger over the ten-slot schema: an activity lexicon, numeric
/// quantities with units, clock times and ranges, day names, frequency
/// phrases, prepositional locations and 1-10 scores. Longest match wins;
/// equal lengths resolve in the order time, repeatation, duration, amount,
/// distance, daynumber, score, location, dayname, activity.
class RuleSlotTagger final : public SlotTaggerBackend {
 public:
  RuleSlotTagger();
  const BackendSpec& spec() const override { return spec_; }
  std::vector<std::string> tag(const std::vector<std::string>& tokens) const override;

 private:
  BackendSpec spec_;
};

/// Keeps the previous value when the patient gives no revision cue and
/// either the previous stage is goal implementation or the coach turn
/// confirmed the previous value.
class RuleCarryover final : public CarryoverBackend {
 public:
  RuleCarryover();
  const BackendSpec& spec() const override { return spec_; }
  CarryoverDecision decide(const CarryoverQuery& query) const override;

 private:
  BackendSpec spec_;
};

/// Stage truth table and per-stage response templates.
///
/// Stage: goal_implementation persists unless the patient asks for a new
/// goal. goal_setting advances when activity, a quantity (amount, duration or
/// distance) and a day slot (dayname, daynumber or repeatation) are filled,
/// the coach turn summarized the goal, and the patient did not object.
///
/// Goal-setting templates ask, in order, for the activity, days, quantity,
/// time and confidence score, then confirm. Every template carries [activity].
class RuleSeqBackend final : public SeqBackend {
 public:
  RuleSeqBackend();
  const BackendSpec& spec() const override { return spec_; }
  std::string generate(const std::string& input, const DecodeOptions& opts) const override;

  static bool goal_complete(const BeliefState& b);
  static bool summarizes_goal(const std::string& coach_text);
  static bool requests_new_goal(const std::string& patient_text);

 private:
  BackendSpec spec_;
};

/// Nearest-neighbour lookup over (input, target) pairs by token overlap.
/// Harness smoke tests only.
class RetrievalSeqBackend final : public SeqBackend {
 public:
  explicit RetrievalSeqBackend(std::vector<std::pair<std::string, std::string>> pairs);
  const BackendSpec& spec() const override { return spec_; }
  std::string generate(const std::string& input, const DecodeOptions& opts) const override;

 private:
  BackendSpec spec_;
  std::vector<std::pair<std::string, std::string>> pairs_;
};

/// Keyword lexicon. Each label's score is the largest cue weight matched;
/// p(label) is proportional to exp(5 * score). No cue gives uniform output.
class RuleEmotionClassifier final : public ClassifierBackend {
 public:
  explicit RuleEmotionClassifier(std::shared_ptr<const EmotionVocabulary> vocab = EmotionVocabulary::builtin());
  const BackendSpec& spec() const override { return spec_; }
  const std::shared_ptr<const EmotionVocabulary>& vocabulary() const override { return vocab_; }
  std::vector<double> predict(const std::string& utterance) const override;

 private:
  BackendSpec spec_;
  std::shared_ptr<const EmotionVocabulary> vocab_;
};

/// Exemplar table: known utterances return their listed top probabilities,
/// the remaining mass spread evenly over the other labels. Unknown input
/// returns the uniform distribution.
class TableEmotionClassifier final : public ClassifierBackend {
 public:
  using Row = std::vector<std::pair<std::string, double>>;
  explicit TableEmotionClassifier(std::map<std::string, Row> rows,
                                  std::shared_ptr<const EmotionVocabulary> vocab = EmotionVocabulary::builtin());
  /// [{"utterance": ..., "top": [{"label": ..., "p": ...}, ...]}, ...]
  static std::shared_ptr<TableEmotionClassifier> from_json(const Json& j);
  const BackendSpec& spec() const override { return spec_; }
  const std::shared_ptr<const EmotionVocabulary>& vocabulary() const override { return vocab_; }
  std::vector<double> predict(const std::string& utterance) const override;

 private:
  BackendSpec spec_;
  std::map<std::string, Row> rows_;
  std::shared_ptr<const EmotionVocabulary> vocab_;
};

/// Questions ("?", what/how/why openers) -> exploration; "I know",
/// "I understand", "must be", "I've had" -> interpretation; "sorry",
/// "oh no", "I hope", "glad", "worried" -> emotional reaction.
class RuleMechanismLabeler final : public MultiLabelBackend {
 public:
  RuleMechanismLabeler();
  const BackendSpec& spec() const override { return spec_; }
  MechanismSet label(const std::string& response) const override;

 private:
  BackendSpec spec_;
};

/// One fixed sentence per requested mechanism, keyed to the valence of the
/// utterance's top emotion (negative, positive, or neutral when no cue).
class TemplateEmpathyGenerator final : public CausalLMBackend {
 public:
  TemplateEmpathyGenerator();
  const BackendSpec& spec() const override { return spec_; }
  std::string complete(const std::string& prompt, const DecodeOptions& opts) const override;

  static std::string sentence(Mechanism m, int valence);

 private:
  BackendSpec spec_;
  RuleEmotionClassifier emotion_;
};

class ConstantRegressor final : public RegressorBackend {
 public:
  explicit ConstantRegressor(double value = 1.0);
  const BackendSpec& spec() const override { return spec_; }
  double score(const std::string&) const override { return value_; }

 private:
  BackendSpec spec_;
  double value_;
};

/// p = 1/V for every token.
class UniformLM final : public LMBackend {
 public:
  explicit UniformLM(std::size_t vocab_size = 50257);
  const BackendSpec& spec() const override { return spec_; }
  LogLikelihood log_likelihood(const std::string& text) const override;

 private:
  BackendSpec spec_;
  std::size_t vocab_size_;
};

class IdentityParaphraser final : public ParaphraserBackend {
 public:
  IdentityParaphraser();
  const BackendSpec& spec() const override { return spec_; }
  std::string paraphrase(const std::string& text, std::uint64_t) const override { return text; }

 private:
  BackendSpec spec_;
};

/// Negative (-1), positive (+1) or neutral (0) valence of an emotion label.
int emotion_valence(std::string_view label);

}  // namespace goalcoach
