// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace goalcoach {

/// A token with its byte range [begin, end) in the source string.
struct Token {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Whitespace + punctuation tokenizer used at the pipeline level.
///
/// Punctuation becomes its own token, except `'`, `-`, `:`, `.`, `,` and `/`
/// when surrounded by alphanumerics on both sides ("didn't", "Mon-Fri",
/// "4:30", "2.5", "3,000" stay whole). Non-ASCII bytes are word characters.
std::vector<Token> tokenize(std::string_view text);
std::vector<std::string> tokenize_words(std::string_view text);

/// Tokenization for generators and language models: whitespace split, then
/// leading/trailing punctuation peeled off as separate tokens. "[slot]"
/// placeholders stay whole.
std::vector<std::string> lm_tokenize(std::string_view text);
/// Joins lm tokens, attaching closing punctuation to the previous token.
std::string lm_detokenize(const std::vector<std::string>& tokens);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

/// Lower-case, collapse internal whitespace runs to one space, trim.
std::string normalize_value(std::string_view s);

bool contains_word(const std::vector<std::string>& lowered_tokens, std::string_view word);
bool contains_phrase(std::string_view lowered_text, std::string_view phrase);

std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::vector<std::string> split(std::string_view s, char sep);

bool starts_with_ci(std::string_view s, std::string_view prefix);

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Mixes two 64-bit values; used to derive per-turn and per-purpose seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace goalcoach
