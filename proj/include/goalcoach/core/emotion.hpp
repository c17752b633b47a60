// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace goalcoach {

inline constexpr std::size_t kEmotionCount = 32;

/// The fixed 32-label emotion inventory, one label per line in a UTF-8 file.
class EmotionVocabulary {
 public:
  /// Throws SchemaError unless the file has exactly 32 distinct non-empty lines.
  static std::shared_ptr<const EmotionVocabulary> load(const std::string& path);
  static std::shared_ptr<const EmotionVocabulary> from_labels(std::vector<std::string> labels);
  /// The vocabulary shipped in data/emotions.txt, compiled in.
  static std::shared_ptr<const EmotionVocabulary> builtin();

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  std::optional<std::size_t> index_of(std::string_view label) const;

 private:
  explicit EmotionVocabulary(std::vector<std::string> labels) : labels_(std::move(labels)) {}
  std::vector<std::string> labels_;
};

/// A full distribution over the emotion vocabulary.
class EmotionPrediction {
 public:
  /// Throws ValidationError unless probabilities are non-negative, match the
  /// vocabulary size and sum to 1 within 1e-6.
  EmotionPrediction(std::shared_ptr<const EmotionVocabulary> vocab, std::vector<double> probs);

  static EmotionPrediction uniform(std::shared_ptr<const EmotionVocabulary> vocab);

  const EmotionVocabulary& vocabulary() const { return *vocab_; }
  const std::shared_ptr<const EmotionVocabulary>& vocabulary_ptr() const { return vocab_; }
  const std::vector<double>& probabilities() const { return probs_; }
  double probability(std::string_view label) const;

  /// The `n` most probable labels, descending; ties broken by vocabulary order.
  std::vector<std::pair<std::string, double>> top_k(std::size_t n) const;

 private:
  std::shared_ptr<const EmotionVocabulary> vocab_;
  std::vector<double> probs_;
};

}  // namespace goalcoach
