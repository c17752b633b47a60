// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/train/train.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

#include "goalcoach/backends/trainable.hpp"
#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"
#include "goalcoach/eval/harness.hpp"

namespace goalcoach {

namespace {

const Corpus& need_corpus(const TrainInputs& in, BackendKind kind) {
  if (in.corpus == nullptr) throw ConfigError(std::string(backend_kind_name(kind)) + " training needs a corpus");
  return *in.corpus;
}

bool held_out(std::string_view key) { return fnv1a64(key) % 10 == 0; }

Json fit_json(const FitStats& s) {
  return {{"steps", s.steps}, {"final_loss", s.epoch_loss.empty() ? 0.0 : s.epoch_loss.back()}};
}

Json prf_json(const PRF& p) { return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}}; }

}  // namespace

TrainResult train_backend(BackendKind kind, const TrainInputs& in, const TrainRecipe& recipe) {
  recipe.validate();
  TrainResult r;
  FitStats stats;
  switch (kind) {
    case BackendKind::kSlotTagger: {
      const CorpusSplit split = split_corpus(need_corpus(in, kind), in.dev_fraction);
      auto data = tagger_examples(split.train);
      std::size_t augmented = 0;
      if (in.augmentation) {
        for (const auto& v : augment_corpus(split.train, *in.augmentation, recipe.seed)) {
          data.push_back(BIOSequence{v.tokens, v.bio_labels});
          ++augmented;
        }
      }
      auto tagger = LinearSlotTagger::train(data, recipe, &stats);
      r.metrics = {{"train_examples", data.size()}, {"augmented_examples", augmented}, {"fit", fit_json(stats)}};
      if (!split.dev.weeks.empty()) r.metrics["dev_slots"] = prf_json(evaluate_tagger(split.dev, *tagger));
      r.backend = tagger;
      break;
    }
    case BackendKind::kCarryover: {
      const CorpusSplit split = split_corpus(need_corpus(in, kind), in.dev_fraction);
      const auto data = mine_collisions(split.train);
      auto carry = LinearCarryover::train(data, recipe, &stats);
      r.metrics = {{"train_examples", data.size()}, {"fit", fit_json(stats)}};
      const auto dev = mine_collisions(split.dev);
      if (!dev.empty()) {
        const BinaryScores b = evaluate_carryover(dev, *carry);
        r.metrics["dev_carryover"] = {{"accuracy", b.accuracy}, {"macro_f1", b.macro_f1}, {"count", b.count}};
      }
      r.backend = carry;
      break;
    }
    case BackendKind::kSeqMultitask: {
      const CorpusSplit split = split_corpus(need_corpus(in, kind), in.dev_fraction);
      const auto data = seq_examples(split.train);
      auto seq = LinearSeqMultitask::train(data, recipe, &stats);
      r.metrics = {{"train_examples", data.size()}, {"fit", fit_json(stats)}};
      if (!split.dev.weeks.empty()) r.metrics["dev_stage_accuracy"] = evaluate_stage(split.dev, *seq);
      r.backend = seq;
      break;
    }
    case BackendKind::kEmotionClassifier: {
      if (in.silver.empty()) throw ConfigError("emotion_classifier training needs silver empathy records");
      const auto vocab = EmotionVocabulary::builtin();
      std::vector<LabeledText> train, dev;
      std::size_t unknown = 0;
      for (const auto& s : in.silver) {
        const std::string label = to_lower(trim(s.emotion));
        if (!vocab->index_of(label)) {
          ++unknown;
          continue;
        }
        (s.split == "train" ? train : dev).push_back(LabeledText{s.sample.utterance, label});
      }
      if (unknown > 0) spdlog::warn("{} records with labels outside the emotion vocabulary skipped", unknown);
      auto clf = LinearEmotionClassifier::train(train, recipe, vocab, &stats);
      r.metrics = {{"train_examples", train.size()}, {"fit", fit_json(stats)}};
      if (!dev.empty()) {
        std::size_t hit = 0;
        for (const auto& d : dev) {
          const auto p = clf->predict(d.text);
          const auto best = std::max_element(p.begin(), p.end()) - p.begin();
          hit += *vocab->index_of(d.label) == static_cast<std::size_t>(best) ? 1 : 0;
        }
        r.metrics["dev_accuracy"] = static_cast<double>(hit) / static_cast<double>(dev.size());
      }
      r.backend = clf;
      break;
    }
    case BackendKind::kMechanismLabeler: {
      if (!in.epitome) throw ConfigError("mechanism_labeler training needs EPITOME data");
      std::vector<MechanismExample> train, dev;
      for (const auto& e : in.epitome->mechanisms) (held_out(e.text) ? dev : train).push_back(e);
      auto lab = LinearMechanismLabeler::train(train, recipe, &stats);
      r.metrics = {{"train_examples", train.size()}, {"fit", fit_json(stats)}};
      if (!dev.empty()) {
        std::size_t exact = 0;
        for (const auto& d : dev) exact += lab->label(d.text) == d.mechanisms ? 1 : 0;
        r.metrics["heldout_exact_match"] = static_cast<double>(exact) / static_cast<double>(dev.size());
      }
      r.backend = lab;
      break;
    }
    case BackendKind::kCausalLm: {
      std::vector<EmpathySample> train;
      for (const auto& s : in.silver) {
        if (s.split == "train") train.push_back(s.sample);
      }
      if (train.empty() && in.few_shot.empty()) throw ConfigError("causal_lm training needs silver records or a few-shot set");
      std::vector<EmpathySample> few = in.few_shot;
      if (recipe.few_shot_samples > 0 && few.size() > static_cast<std::size_t>(recipe.few_shot_samples)) {
        few.resize(static_cast<std::size_t>(recipe.few_shot_samples));
      }
      r.backend = NGramEmpathyGenerator::train(train, few, recipe);
      r.metrics = {{"train_examples", train.size()}, {"few_shot_examples", few.size()}};
      break;
    }
    case BackendKind::kEmpathyRegressor: {
      if (!in.epitome) throw ConfigError("empathy_regressor training needs EPITOME data");
      std::vector<ScoredText> train, dev;
      for (const auto& e : in.epitome->levels) (held_out(e.text) ? dev : train).push_back(e);
      auto reg = LinearRegressor::train(train, recipe, &stats);
      r.metrics = {{"train_examples", train.size()}, {"fit", fit_json(stats)}};
      if (!dev.empty()) {
        double se = 0.0;
        for (const auto& d : dev) se += std::pow(reg->score(d.text) - d.score, 2);
        r.metrics["heldout_rmse"] = std::sqrt(se / static_cast<double>(dev.size()));
      }
      r.backend = reg;
      break;
    }
    case BackendKind::kLmScorer: {
      std::vector<std::string> sentences = in.sentences;
      if (sentences.empty() && in.corpus != nullptr) {
        for (const auto& w : in.corpus->weeks) {
          for (const auto& u : w.turns) sentences.push_back(u.text);
        }
      }
      if (sentences.empty()) throw ConfigError("lm_scorer training needs sentences or a corpus");
      r.backend = NGramScorer::train(sentences, recipe);
      r.metrics = {{"train_sentences", sentences.size()}};
      break;
    }
    case BackendKind::kParaphraser: {
      if (in.pairs.empty()) throw ConfigError("paraphraser training needs aligned pairs");
      auto p = TableParaphraser::train(in.pairs, recipe);
      r.metrics = {{"train_pairs", in.pairs.size()}, {"rules", p->rules().size()}};
      r.backend = p;
      break;
    }
  }
  return r;
}

}  // namespace goalcoach
