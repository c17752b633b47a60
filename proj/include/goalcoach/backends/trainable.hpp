// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Trainable CPU implementations of every backend kind: hashed linear heads
// (tagger, carryover, stage, emotion, mechanisms, regressor) and n-gram
// generators (responses, empathy, LM scorer), plus a substitution-table
// paraphraser. Each persists its parameters under an artifact directory.

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "goalcoach/backends/interfaces.hpp"
#include "goalcoach/backends/linear_model.hpp"
#include "goalcoach/backends/ngram.hpp"
#include "goalcoach/backends/recipe.hpp"
#include "goalcoach/nlg/emp.hpp"
#include "goalcoach/nlu/bio.hpp"

namespace goalcoach {

class PersistentBackend {
 public:
  virtual ~PersistentBackend() = default;
  /// Writes the model payload files into `dir` (which must exist).
  virtual void save_payload(const std::filesystem::path& dir) const = 0;
};

// ---------------------------------------------------------------------------
// training data

struct CarryoverExample {
  CarryoverQuery query;
  bool keep_previous = false;
};

struct SeqExample {
  std::string input;   // assembled input
  std::string target;  // stage token or delexicalized response
};

struct LabeledText {
  std::string text;
  std::string label;
};

struct MechanismExample {
  std::string text;
  MechanismSet mechanisms;
};

struct ScoredText {
  std::string text;
  double score = 0.0;
};

struct ParaphrasePair {
  std::string source;
  std::string target;
};

// ---------------------------------------------------------------------------

/// Per-token softmax over the 21 BIO labels with lexical, shape and window
/// features, decoded by BIO-constrained Viterbi.
class LinearSlotTagger final : public SlotTaggerBackend, public PersistentBackend {
 public:
  LinearSlotTagger(BackendSpec spec, HashedLinearModel model);
  static std::shared_ptr<LinearSlotTagger> train(const std::vector<BIOSequence>& data, const TrainRecipe& recipe,
                                                 FitStats* stats = nullptr);
  static std::shared_ptr<LinearSlotTagger> load(const std::filesystem::path& dir, BackendSpec spec);

  const BackendSpec& spec() const override { return spec_; }
  std::vector<std::string> tag(const std::vector<std::string>& tokens) const override;
  void save_payload(const std::filesystem::path& dir) const override;

 private:
  BackendSpec spec_;
  HashedLinearModel model_;
};

/// Binary keep/replace head over context-only features.
class LinearCarryover final : public CarryoverBackend, public PersistentBackend {
 public:
  LinearCarryover(BackendSpec spec, HashedLinearModel model);
  static std::shared_ptr<LinearCarryover> train(const std::vector<CarryoverExample>& data,
                                                const TrainRecipe& recipe, FitStats* stats = nullptr);
  static std::shared_ptr<LinearCarryover> load(const std::filesystem::path& dir, BackendSpec spec);

  const BackendSpec& spec() const override { return spec_; }
  CarryoverDecision decide(const CarryoverQuery& query) const override;
  void save_payload(const std::filesystem::path& dir) const override;

 private:
  BackendSpec spec_;
  HashedLinearModel model_;
};

/// Stage head plus an n-gram response generator conditioned on the stage
/// and on the first goal attribute still missing.
class LinearSeqMultitask final : public SeqBackend, public PersistentBackend {
 public:
  LinearSeqMultitask(BackendSpec spec, HashedLinearModel stage_model, ConditionalNGram generator);
  /// Examples are routed by their task prefix.
  static std::shared_ptr<LinearSeqMultitask> train(const std::vector<SeqExample>& data, const TrainRecipe& recipe,
                                                   FitStats* stats = nullptr);
  static std::shared_ptr<LinearSeqMultitask> load(const std::filesystem::path& dir, BackendSpec spec);

  const BackendSpec& spec() const override { return spec_; }
  std::string generate(const std::string& input, const DecodeOptions& opts) const override;
  void save_payload(const std::filesystem::path& dir) const override;

  /// Generator condition key for a stage and belief, e.g. "goal_setting/dayname".
  static std::string response_condition(Stage stage, const BeliefState& belief);

 private:
  BackendSpec spec_;
  HashedLinearModel stage_model_;
  ConditionalNGram generator_;
};

class LinearEmotionClassifier final : public ClassifierBackend, public PersistentBackend {
 public:
  LinearEmotionClassifier(BackendSpec spec, HashedLinearModel model, std::shared_ptr<const EmotionVocabulary> vocab);
  /// Labels must belong to `vocab`.
  static std::shared_ptr<LinearEmotionClassifier> train(const std::vector<LabeledText>& data,
                                                        const TrainRecipe& recipe,
                                                        std::shared_ptr<const EmotionVocabulary> vocab = EmotionVocabulary::builtin(),
                                                        FitStats* stats = nullptr);
  static std::shared_ptr<LinearEmotionClassifier> load(const std::filesystem::path& dir, BackendSpec spec);

  const BackendSpec& spec() const override { return spec_; }
  const std::shared_ptr<const EmotionVocabulary>& vocabulary() const override { return vocab_; }
  std::vector<double> predict(const std::string& utterance) const override;
  void save_payload(const std::filesystem::path& dir) const override;

 private:
  BackendSpec spec_;
  HashedLinearModel model_;
  std::shared_ptr<const EmotionVocabulary> vocab_;
};

/// Three independent sigmoid outputs thresholded at 0.5.
class LinearMechanismLabeler final : public MultiLabelBackend, public PersistentBackend {
 public:
  LinearMechanismLabeler(BackendSpec spec, HashedLinearModel model);
  static std::shared_ptr<LinearMechanismLabeler> train(const std::vector<MechanismExample>& data,
                                                       const TrainRecipe& recipe, FitStats* stats = nullptr);
  static std::shared_ptr<LinearMechanismLabeler> load(const std::filesystem::path& dir, BackendSpec spec);

  const BackendSpec& spec() const override { return spec_; }
  MechanismSet label(const std::string& response) const override;
  void save_payload(const std::filesystem::path& dir) const override;

 private:
  BackendSpec spec_;
  HashedLinearModel model_;
};

/// Mechanism-conditioned n-gram generator. The optional few-shot set is
/// added once with its own weight after the main corpus.
class NGramEmpathyGenerator final : public CausalLMBackend, public PersistentBackend {
 public:
  NGramEmpathyGenerator(BackendSpec spec, ConditionalNGram lm);
  static std::shared_ptr<NGramEmpathyGenerator> train(const std::vector<EmpathySample>& data,
                                                      const std::vector<EmpathySample>& few_shot,
                                                      const TrainRecipe& recipe);
  static std::shared_ptr<NGramEmpathyGenerator> load(const std::filesystem::path& dir, BackendSpec spec);

  const BackendSpec& spec() const override { return spec_; }
  std::string complete(const std::string& prompt, const DecodeOptions& opts) const override;
  void save_payload(const std::filesystem::path& dir) const override;

 private:
  BackendSpec spec_;
  ConditionalNGram lm_;
};

class LinearRegressor final : public RegressorBackend, public PersistentBackend {
 public:
  LinearRegressor(BackendSpec spec, HashedLinearModel model);
  static std::shared_ptr<LinearRegressor> train(const std::vector<ScoredText>& data, const TrainRecipe& recipe,
                                                FitStats* stats = nullptr);
  static std::shared_ptr<LinearRegressor> load(const std::filesystem::path& dir, BackendSpec spec);

  const BackendSpec& spec() const override { return spec_; }
  double score(const std::string& text) const override;
  void save_payload(const std::filesystem::path& dir) const override;

 private:
  BackendSpec spec_;
  HashedLinearModel model_;
};

class NGramScorer final : public LMBackend, public PersistentBackend {
 public:
  NGramScorer(BackendSpec spec, NGramLM lm);
  static std::shared_ptr<NGramScorer> train(const std::vector<std::string>& sentences, const TrainRecipe& recipe);
  static std::shared_ptr<NGramScorer> load(const std::filesystem::path& dir, BackendSpec spec);

  const BackendSpec& spec() const override { return spec_; }
  LogLikelihood log_likelihood(const std::string& text) const override;
  void save_payload(const std::filesystem::path& dir) const override;

 private:
  BackendSpec spec_;
  NGramLM lm_;
};

/// Phrase substitutions mined from aligned pairs (the differing middle once
/// the common token prefix and suffix are removed, at most four tokens).
/// A seeded choice among the rules whose source occurs in the input.
class TableParaphraser final : public ParaphraserBackend, public PersistentBackend {
 public:
  using Rule = std::pair<std::vector<std::string>, std::vector<std::string>>;
  TableParaphraser(BackendSpec spec, std::vector<Rule> rules);
  static std::shared_ptr<TableParaphraser> train(const std::vector<ParaphrasePair>& data, const TrainRecipe& recipe);
  static std::shared_ptr<TableParaphraser> load(const std::filesystem::path& dir, BackendSpec spec);

  const BackendSpec& spec() const override { return spec_; }
  std::string paraphrase(const std::string& text, std::uint64_t seed) const override;
  void save_payload(const std::filesystem::path& dir) const override;
  const std::vector<Rule>& rules() const { return rules_; }

 private:
  BackendSpec spec_;
  std::vector<Rule> rules_;
};

/// Lower-cased unigram + bigram bag with a bias feature.
std::vector<Feature> text_features(std::string_view text, int dim_bits);

}  // namespace goalcoach
