// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "goalcoach/backends/interfaces.hpp"

namespace goalcoach {

inline constexpr const char* kSentenceStart = "<s>";
inline constexpr const char* kSentenceEnd = "</s>";

/// Word trigram LM with interpolated absolute discounting down to an add-one
/// unigram (which reserves mass for unseen words). Counts may be weighted.
class NGramLM {
 public:
  explicit NGramLM(double discount = 0.75) : discount_(discount) {}

  /// Adds a sentence padded with two <s> and a final </s>.
  void add_sentence(const std::vector<std::string>& tokens, double weight = 1.0);

  /// P(w | u v).
  double prob(const std::string& u, const std::string& v, const std::string& w) const;
  /// Sum of natural-log probabilities over tokens and the closing </s>.
  LogLikelihood score_sentence(const std::vector<std::string>& tokens) const;

  /// Vocabulary seen in training plus </s>, in sorted order.
  const std::vector<std::string>& vocabulary() const;
  std::size_t vocab_size() const { return vocabulary().size(); }
  bool empty() const { return total_ == 0.0; }

  Json to_json() const;
  static NGramLM from_json(const Json& j);

 private:
  struct Dist {
    std::unordered_map<std::string, double> counts;
    double total = 0.0;
  };
  double unigram(const std::string& w) const;
  double bigram(const std::string& v, const std::string& w) const;

  double discount_;
  std::unordered_map<std::string, double> unigrams_;
  double total_ = 0.0;
  std::unordered_map<std::string, Dist> bigrams_;
  std::unordered_map<std::string, Dist> trigrams_;
  std::map<std::string, double> trigram_counts_;  // "u\x1fv\x1fw" -> count, for persistence
  mutable std::vector<std::string> vocab_cache_;
};

/// Distribution over next tokens, given the generated history.
using NextTokenFn =
    std::function<std::vector<std::pair<std::string, double>>(const std::vector<std::string>&)>;

/// Autoregressive decoding loop shared by the n-gram generators. Stops at
/// </s> or opts.max_tokens. Sampling uses top-k then nucleus (top-p)
/// filtering; greedy decoding blocks repeated trigrams.
std::vector<std::string> decode_tokens(const NextTokenFn& next, const DecodeOptions& opts);

/// Index drawn from `probs` after top-k / top-p truncation and renormalization.
std::size_t sample_top_k_top_p(const std::vector<double>& probs, int top_k, double top_p,
                               std::mt19937_64& rng);

/// Mixture of a global LM and per-condition LMs:
/// P(w|h,c) = lambda * P_c(w|h) + (1 - lambda) * P_global(w|h).
class ConditionalNGram {
 public:
  explicit ConditionalNGram(double lambda = 0.7) : lambda_(lambda) {}

  void add(const std::string& condition, const std::vector<std::string>& tokens, double weight = 1.0);
  std::vector<std::pair<std::string, double>> next(const std::string& condition,
                                                   const std::vector<std::string>& history) const;
  std::vector<std::string> generate(const std::string& condition, const DecodeOptions& opts) const;
  bool empty() const { return global_.empty(); }

  Json to_json() const;
  static ConditionalNGram from_json(const Json& j);

 private:
  double lambda_;
  NGramLM global_;
  std::map<std::string, NGramLM> by_condition_;
};

}  // namespace goalcoach
