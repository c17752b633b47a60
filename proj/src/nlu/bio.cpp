// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/nlu/bio.hpp"

#include <algorithm>

#include "goalcoach/core/errors.hpp"

namespace goalcoach {

const std::vector<std::string>& bio_labels() {
  static const std::vector<std::string> labels = [] {
    std::vector<std::string> out{"O"};
    for (Slot s : kAllSlots) {
      out.push_back("B-" + std::string(slot_name(s)));
      out.push_back("I-" + std::string(slot_name(s)));
    }
    return out;
  }();
  return labels;
}

std::optional<int> bio_label_id(std::string_view label) {
  const auto& labels = bio_labels();
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<int>(it - labels.begin());
}

BioTag parse_bio_label(std::string_view label) {
  if (label == "O") return {};
  if (label.size() > 2 && label[1] == '-' && (label[0] == 'B' || label[0] == 'I')) {
    if (auto slot = parse_slot(label.substr(2))) {
      return {label[0] == 'B' ? BioTag::Kind::kBegin : BioTag::Kind::kInside, *slot};
    }
  }
  throw ValidationError("unknown BIO label '" + std::string(label) + "'");
}

std::string format_bio_label(const BioTag& tag) {
  switch (tag.kind) {
    case BioTag::Kind::kOutside: return "O";
    case BioTag::Kind::kBegin: return "B-" + std::string(slot_name(tag.slot));
    case BioTag::Kind::kInside: return "I-" + std::string(slot_name(tag.slot));
  }
  return "O";
}

void BIOSequence::validate() const {
  if (tokens.size() != labels.size()) {
    throw ValidationError("BIO sequence has " + std::to_string(tokens.size()) + " tokens and " +
                          std::to_string(labels.size()) + " labels");
  }
  if (!is_valid_bio(labels)) throw ValidationError("I- label without a matching B-/I- predecessor");
}

bool is_valid_bio(const std::vector<std::string>& labels) {
  BioTag prev;
  for (const auto& l : labels) {
    const BioTag tag = parse_bio_label(l);
    if (tag.kind == BioTag::Kind::kInside &&
        (prev.kind == BioTag::Kind::kOutside || prev.slot != tag.slot)) {
      return false;
    }
    prev = tag;
  }
  return true;
}

std::vector<std::string> repair_bio(const std::vector<std::string>& labels) {
  std::vector<std::string> out;
  out.reserve(labels.size());
  BioTag prev;
  for (const auto& l : labels) {
    BioTag tag = parse_bio_label(l);
    if (tag.kind == BioTag::Kind::kInside &&
        (prev.kind == BioTag::Kind::kOutside || prev.slot != tag.slot)) {
      tag.kind = BioTag::Kind::kBegin;
    }
    out.push_back(format_bio_label(tag));
    prev = tag;
  }
  return out;
}

std::vector<SlotSpan> decode_bio(const std::vector<Token>& tokens,
                                 const std::vector<std::string>& labels,
                                 std::optional<std::string_view> source) {
  if (tokens.size() != labels.size()) throw ValidationError("token/label count mismatch");
  const auto repaired = repair_bio(labels);
  std::vector<SlotSpan> spans;
  auto close = [&](int start, int end, Slot slot) {
    SlotSpan s;
    s.slot = slot;
    s.token_start = start;
    s.token_end = end;
    if (source) {
      const auto b = tokens[static_cast<std::size_t>(start)].begin;
      const auto e = tokens[static_cast<std::size_t>(end)].end;
      s.value = std::string(source->substr(b, e - b));
    } else {
      std::vector<std::string> parts;
      for (int i = start; i <= end; ++i) parts.push_back(tokens[static_cast<std::size_t>(i)].text);
      s.value = join(parts, " ");
    }
    spans.push_back(std::move(s));
  };
  int start = -1;
  Slot current = Slot::kActivity;
  for (std::size_t i = 0; i < repaired.size(); ++i) {
    const BioTag tag = parse_bio_label(repaired[i]);
    if (tag.kind == BioTag::Kind::kInside) continue;
    if (start >= 0) close(start, static_cast<int>(i) - 1, current);
    start = -1;
    if (tag.kind == BioTag::Kind::kBegin) {
      start = static_cast<int>(i);
      current = tag.slot;
    }
  }
  if (start >= 0) close(start, static_cast<int>(repaired.size()) - 1, current);
  return spans;
}

std::vector<std::string> encode_spans(std::size_t token_count, const std::vector<SlotSpan>& spans) {
  std::vector<std::string> labels(token_count, "O");
  std::vector<char> used(token_count, 0);
  for (const auto& s : spans) {
    if (s.token_start < 0 || s.token_end < s.token_start ||
        static_cast<std::size_t>(s.token_end) >= token_count) {
      throw ValidationError("span [" + std::to_string(s.token_start) + "," +
                            std::to_string(s.token_end) + "] outside " +
                            std::to_string(token_count) + " tokens");
    }
    for (int i = s.token_start; i <= s.token_end; ++i) {
      if (used[static_cast<std::size_t>(i)]) throw ValidationError("overlapping slot spans");
      used[static_cast<std::size_t>(i)] = 1;
      labels[static_cast<std::size_t>(i)] =
          (i == s.token_start ? "B-" : "I-") + std::string(slot_name(s.slot));
    }
  }
  return labels;
}

}  // namespace goalcoach
