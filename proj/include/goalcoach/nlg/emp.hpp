// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "goalcoach/backends/interfaces.hpp"
#include "goalcoach/diagnostics.hpp"

namespace goalcoach {

inline constexpr std::string_view kBos = "<|bos|>";
inline constexpr std::string_view kSep = "<|sep|>";
inline constexpr std::string_view kEos = "<|eos|>";
inline constexpr std::string_view kEmpathyFallback = "I'm sorry to hear that.";
inline constexpr int kMaxEmpatheticTokens = 96;

struct EmpathySample {
  std::string utterance;
  std::string response;
  MechanismSet mechanisms;

  friend bool operator==(const EmpathySample&, const EmpathySample&) = default;
};

/// "<|bos|> [EMOR] [INTERP] utterance <|sep|> response <|eos|>" with only the
/// present mechanisms, in canonical order. Throws CodecError when the sample
/// is invalid: no mechanism, blank payload, or a payload containing a newline,
/// a delimiter or a mechanism token.
std::string encode_training_sequence(const EmpathySample& sample);

/// Inverse of encode_training_sequence; CodecError carries the byte offset.
EmpathySample decode_training_sequence(std::string_view line);

/// Generation prompt: "<|bos|> TOKENS utterance <|sep|>".
std::string empathy_prompt(std::string_view utterance, MechanismSet mechanisms);

/// Removes delimiters, mechanism tokens and any "<|...|>" token; trims.
std::string strip_special_tokens(std::string_view text);

struct GateConfig {
  double tau = 0.7;
  int top_n = 2;
  /// When non-empty, the top label must also be listed. Off by default.
  std::vector<std::string> valence_allow_list;

  /// Throws ConfigError unless 0 < tau < 1 and top_n >= 1.
  void validate() const;
};

/// Backend failure or an invalid distribution yields the uniform distribution
/// and a recorded fallback.
EmotionPrediction detect_emotion(const std::string& utterance, const ClassifierBackend& backend,
                                 Diagnostics* diag = nullptr);

/// True iff the summed probability of the top_n labels exceeds tau.
bool should_empathize(const EmotionPrediction& emotion, const GateConfig& gate);

/// Continuation of empathy_prompt(utterance, mechanisms), cut at <|eos|> or
/// kMaxEmpatheticTokens whitespace tokens, special tokens stripped. Falls back
/// to kEmpathyFallback on backend failure or empty output.
std::string generate_empathetic(const std::string& utterance, MechanismSet mechanisms,
                                const CausalLMBackend& backend, const DecodeOptions& opts = {},
                                Diagnostics* diag = nullptr);

/// Backend failures propagate (silver labeling must not hide them).
MechanismSet label_mechanisms(const std::string& response, const MultiLabelBackend& backend);

}  // namespace goalcoach
