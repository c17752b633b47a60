// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Stage prediction and stage-conditioned response generation through one
// text-to-text backend, plus lexicalization against the belief state.
//
// Input layout (bit-exact):
//   <prefix><|context|> CONTEXT <|belief|> BELIEF <|stage|> STAGE
// CONTEXT is "<|coach|> text <|patient|> text" for the window turns, BELIEF
// is serialize_belief(), STAGE is stage_token(). Empty fields collapse to
// nothing, so an empty context renders "<|context|> <|belief|>".

#include <string>
#include <string_view>
#include <vector>

#include "goalcoach/backends/interfaces.hpp"
#include "goalcoach/diagnostics.hpp"

namespace goalcoach {

inline constexpr std::string_view kStagePrefix = "predict stage: ";
inline constexpr std::string_view kResponsePrefix = "generate response: ";
inline constexpr std::string_view kContextSep = "<|context|>";
inline constexpr std::string_view kBeliefSep = "<|belief|>";
inline constexpr std::string_view kStageSep = "<|stage|>";
inline constexpr std::string_view kCoachMarker = "<|coach|>";
inline constexpr std::string_view kPatientMarker = "<|patient|>";

inline constexpr std::string_view kFallbackResponse = "Could you tell me more about your goal?";
inline constexpr std::string_view kUnfilledPhrase = "your goal";

struct AssembledInput {
  std::string task_prefix;
  std::string context_text;
  std::string belief_text;
  std::string stage_token;
  std::string rendered;
};

/// Neutralizes special-token syntax ("<|") inside free text.
std::string escape_special(std::string_view text);

std::string render_context(const std::vector<DialogueTurn>& window);
/// Inverse of render_context (stage labels are not carried).
std::vector<DialogueTurn> parse_context(std::string_view context_text);

AssembledInput assemble(std::string_view prefix, const SessionContext& ctx, Stage stage);
/// Stage token is the previous stage.
AssembledInput assemble_stage_input(const SessionContext& ctx);
/// Stage token is the predicted current stage.
AssembledInput assemble_response_input(const SessionContext& ctx, Stage stage);
/// Recovers all four fields. Throws ValidationError on malformed input.
AssembledInput split_assembled(std::string_view rendered);

/// Never fails: unparseable output or backend failure keeps the previous stage
/// and records a fallback.
Stage predict_stage(const SessionContext& ctx, const SeqBackend& backend,
                    Diagnostics* diag = nullptr, const DecodeOptions& opts = {});

struct DelexResponse {
  std::string text;
  /// Slots named by [slot] placeholders, in order of appearance.
  std::vector<Slot> placeholders() const;
};

/// Bracketed lower-case words in `text` that are not slot names.
std::vector<std::string> invalid_placeholders(std::string_view text);

DelexResponse generate_response(const SessionContext& ctx, Stage stage, const SeqBackend& backend,
                                const DecodeOptions& opts = {}, Diagnostics* diag = nullptr);

/// "a", "a and b", "a, b and c".
std::string join_values(const std::vector<std::string>& values);

struct Lexicalized {
  std::string text;
  std::vector<Slot> unfilled;
};

Lexicalized lexicalize(const DelexResponse& response, const BeliefState& belief);

}  // namespace goalcoach
