// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "goalcoach/core/slot.hpp"
#include "goalcoach/core/text.hpp"

namespace goalcoach {

/// A slot filler: token range [token_start, token_end] (inclusive) in the
/// pipeline tokenization of one utterance.
struct SlotSpan {
  Slot slot = Slot::kActivity;
  std::string value;
  int token_start = 0;
  int token_end = 0;

  friend bool operator==(const SlotSpan&, const SlotSpan&) = default;
};

/// "O", then "B-<slot>", "I-<slot>" for each slot in enumeration order (21 labels).
const std::vector<std::string>& bio_labels();
std::optional<int> bio_label_id(std::string_view label);

struct BioTag {
  enum class Kind { kOutside, kBegin, kInside } kind = Kind::kOutside;
  Slot slot = Slot::kActivity;
};
/// Throws ValidationError on an unknown label string.
BioTag parse_bio_label(std::string_view label);
std::string format_bio_label(const BioTag& tag);

struct BIOSequence {
  std::vector<std::string> tokens;
  std::vector<std::string> labels;

  /// Throws ValidationError unless |tokens| == |labels|, all labels are known,
  /// and no I-x follows O, the sequence start, or a tag of another slot.
  void validate() const;
};

bool is_valid_bio(const std::vector<std::string>& labels);

/// Promotes every orphan I-x to B-x. Unknown labels throw ValidationError.
std::vector<std::string> repair_bio(const std::vector<std::string>& labels);

/// Decodes spans from a (repaired) label sequence. When `source` is given the
/// value is the exact source substring covered by the tokens; otherwise the
/// token texts joined by single spaces.
std::vector<SlotSpan> decode_bio(const std::vector<Token>& tokens,
                                 const std::vector<std::string>& labels,
                                 std::optional<std::string_view> source = std::nullopt);

/// Labels for `token_count` tokens. Throws ValidationError on spans that
/// overlap, are empty/reversed, or fall outside the token range.
std::vector<std::string> encode_spans(std::size_t token_count, const std::vector<SlotSpan>& spans);

}  // namespace goalcoach
