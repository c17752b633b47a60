// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/core/text.hpp"

#include <algorithm>
#include <cctype>

namespace goalcoach {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_word_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) != 0;
}

bool is_joiner(char c) {
  return c == '\'' || c == '-' || c == ':' || c == '.' || c == ',' || c == '/';
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    if (!is_word_char(text[i])) {
      out.push_back({std::string(1, text[i]), i, i + 1});
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n) {
      if (is_word_char(text[j])) {
        ++j;
      } else if (is_joiner(text[j]) && j + 1 < n && is_word_char(text[j + 1]) && j > i) {
        j += 1;
      } else {
        break;
      }
    }
    out.push_back({std::string(text.substr(i, j - i)), i, j});
    i = j;
  }
  return out;
}

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text)) out.push_back(std::move(t.text));
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string normalize_value(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

namespace {
bool is_peelable(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':' || c == '"' ||
         c == '(' || c == ')';
}
bool attaches_left(std::string_view t) {
  return t == "." || t == "," || t == "!" || t == "?" || t == ";" || t == ":" || t == ")";
}
}  // namespace

std::vector<std::string> lm_tokenize(std::string_view text) {
  std::string flat(text);
  for (char& c : flat) {
    if (is_space(c)) c = ' ';
  }
  std::vector<std::string> out;
  for (const auto& chunk : split(flat, ' ')) {
    std::string_view w = chunk;
    if (w.empty()) continue;
    std::size_t b = 0;
    std::size_t e = w.size();
    while (b < e && is_peelable(w[b])) ++b;
    while (e > b && is_peelable(w[e - 1])) --e;
    for (std::size_t i = 0; i < b; ++i) out.emplace_back(1, w[i]);
    if (e > b) out.emplace_back(w.substr(b, e - b));
    for (std::size_t i = e; i < w.size(); ++i) out.emplace_back(1, w[i]);
  }
  return out;
}

std::string lm_detokenize(const std::vector<std::string>& tokens) {
  std::string out;
  bool glue_next = false;
  for (const auto& t : tokens) {
    if (!out.empty() && !attaches_left(t) && !glue_next) out += ' ';
    out += t;
    glue_next = t == "(";
  }
  return out;
}

bool contains_word(const std::vector<std::string>& lowered_tokens, std::string_view word) {
  return std::find(lowered_tokens.begin(), lowered_tokens.end(), word) != lowered_tokens.end();
}

bool contains_phrase(std::string_view lowered_text, std::string_view phrase) {
  // Whole-word containment on a lower-cased, tokenized rendering.
  std::string hay = " " + join(tokenize_words(lowered_text), " ") + " ";
  std::string needle = " " + join(tokenize_words(phrase), " ") + " ";
  return hay.find(needle) != std::string::npos;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i])))
      return false;
  }
  return true;
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace goalcoach
