// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/core/emotion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"

namespace goalcoach {

std::shared_ptr<const EmotionVocabulary> EmotionVocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open emotion vocabulary '" + path + "'");
  std::vector<std::string> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) throw SchemaError("empty emotion label", lineno);
    labels.push_back(trim(line));
  }
  return from_labels(std::move(labels));
}

std::shared_ptr<const EmotionVocabulary> EmotionVocabulary::from_labels(
    std::vector<std::string> labels) {
  if (labels.size() != kEmotionCount) {
    throw SchemaError("emotion vocabulary must have exactly 32 labels, got " +
                      std::to_string(labels.size()));
  }
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty() || !seen.insert(to_lower(l)).second) {
      throw SchemaError("emotion label '" + l + "' empty or repeated");
    }
  }
  return std::shared_ptr<const EmotionVocabulary>(new EmotionVocabulary(std::move(labels)));
}

std::shared_ptr<const EmotionVocabulary> EmotionVocabulary::builtin() {
  static const auto vocab = from_labels({
      "Afraid",   "Angry",       "Annoyed",   "Anticipating", "Anxious",   "Apprehensive",
      "Ashamed",  "Caring",      "Confident", "Content",      "Devastated", "Disappointed",
      "Disgusted", "Embarrassed", "Excited",  "Faithful",     "Furious",   "Grateful",
      "Guilty",   "Hopeful",     "Impressed", "Jealous",      "Joyful",    "Lonely",
      "Nostalgic", "Prepared",   "Proud",     "Sad",          "Sentimental", "Surprised",
      "Terrified", "Trusting",
  });
  return vocab;
}

std::optional<std::size_t> EmotionVocabulary::index_of(std::string_view label) const {
  const std::string needle = to_lower(label);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (to_lower(labels_[i]) == needle) return i;
  }
  return std::nullopt;
}

EmotionPrediction::EmotionPrediction(std::shared_ptr<const EmotionVocabulary> vocab,
                                     std::vector<double> probs)
    : vocab_(std::move(vocab)), probs_(std::move(probs)) {
  if (!vocab_) throw ValidationError("emotion prediction without vocabulary");
  if (probs_.size() != vocab_->size()) {
    throw ValidationError("emotion distribution has " + std::to_string(probs_.size()) +
                          " entries, expected " + std::to_string(vocab_->size()));
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError("negative or non-finite probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw ValidationError("emotion distribution sums to " + std::to_string(total));
  }
}

EmotionPrediction EmotionPrediction::uniform(std::shared_ptr<const EmotionVocabulary> vocab) {
  const std::size_t n = vocab->size();
  return EmotionPrediction(std::move(vocab), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double EmotionPrediction::probability(std::string_view label) const {
  auto idx = vocab_->index_of(label);
  return idx ? probs_[*idx] : 0.0;
}

std::vector<std::pair<std::string, double>> EmotionPrediction::top_k(std::size_t n) const {
  std::vector<std::size_t> order(probs_.size());
  std::iota(order.begin(), order.end(), 0);
  n = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return probs_[a] != probs_[b] ? probs_[a] > probs_[b] : a < b;
                    });
  std::vector<std::pair<std::string, double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(vocab_->labels()[order[i]], probs_[order[i]]);
  return out;
}

}  // namespace goalcoach
