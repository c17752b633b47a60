// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/nlg/emp.hpp"

#include <algorithm>
#include <cmath>

#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"
#include "goalcoach/nlg/hc.hpp"

namespace goalcoach {
namespace {

void check_payload(std::string_view payload, std::string_view what, std::size_t offset) {
  if (trim(payload).empty()) throw CodecError(std::string(what) + " is empty", offset);
  if (auto nl = payload.find_first_of("\r\n"); nl != std::string_view::npos) {
    throw CodecError(std::string(what) + " contains a line break", offset + nl);
  }
  for (std::string_view delim : {kBos, kSep, kEos}) {
    if (auto p = payload.find(delim); p != std::string_view::npos) {
      throw CodecError(std::string(what) + " contains delimiter " + std::string(delim), offset + p);
    }
  }
  for (Mechanism m : kAllMechanisms) {
    if (auto p = payload.find(mechanism_token(m)); p != std::string_view::npos) {
      throw CodecError(std::string(what) + " contains mechanism token", offset + p);
    }
  }
}

}  // namespace

std::string encode_training_sequence(const EmpathySample& sample) {
  if (sample.mechanisms.empty()) throw CodecError("sample has no mechanism", 0);
  check_payload(sample.utterance, "utterance", 0);
  check_payload(sample.response, "response", 0);
  std::string out(kBos);
  out += ' ';
  out += sample.mechanisms.tokens();
  out += ' ';
  out += sample.utterance;
  out += ' ';
  out += kSep;
  out += ' ';
  out += sample.response;
  out += ' ';
  out += kEos;
  return out;
}

EmpathySample decode_training_sequence(std::string_view line) {
  const std::string bos = std::string(kBos) + " ";
  if (line.substr(0, bos.size()) != bos) throw CodecError("missing <|bos|> prefix", 0);
  std::size_t pos = bos.size();
  EmpathySample s;
  int last_rank = -1;
  while (true) {
    bool matched = false;
    for (std::size_t r = 0; r < kAllMechanisms.size(); ++r) {
      const std::string tok = std::string(mechanism_token(kAllMechanisms[r])) + " ";
      if (line.substr(pos, tok.size()) == tok) {
        if (static_cast<int>(r) <= last_rank) {
          throw CodecError("mechanism tokens out of canonical order", pos);
        }
        last_rank = static_cast<int>(r);
        s.mechanisms.insert(kAllMechanisms[r]);
        pos += tok.size();
        matched = true;
        break;
      }
    }
    if (!matched) break;
  }
  if (s.mechanisms.empty()) throw CodecError("expected a mechanism token", pos);

  const std::string sep = " " + std::string(kSep) + " ";
  const std::string eos = " " + std::string(kEos);
  const auto sep_pos = line.find(sep, pos);
  if (sep_pos == std::string_view::npos) throw CodecError("missing <|sep|>", line.size());
  if (line.size() < eos.size() || line.substr(line.size() - eos.size()) != eos) {
    throw CodecError("missing trailing <|eos|>", line.size());
  }
  const std::size_t resp_begin = sep_pos + sep.size();
  const std::size_t resp_end = line.size() - eos.size();
  if (resp_end < resp_begin) throw CodecError("empty response", resp_begin);
  s.utterance = std::string(line.substr(pos, sep_pos - pos));
  s.response = std::string(line.substr(resp_begin, resp_end - resp_begin));
  check_payload(s.utterance, "utterance", pos);
  check_payload(s.response, "response", resp_begin);
  return s;
}

std::string empathy_prompt(std::string_view utterance, MechanismSet mechanisms) {
  std::string out(kBos);
  out += ' ';
  out += mechanisms.tokens();
  out += ' ';
  out += utterance;
  out += ' ';
  out += kSep;
  return out;
}

std::string strip_special_tokens(std::string_view text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.substr(i, 2) == "<|") {
      const auto close = text.find("|>", i + 2);
      if (close != std::string_view::npos) {
        i = close + 2;
        continue;
      }
    }
    bool mech = false;
    for (Mechanism m : kAllMechanisms) {
      const auto tok = mechanism_token(m);
      if (text.substr(i, tok.size()) == tok) {
        i += tok.size();
        mech = true;
        break;
      }
    }
    if (mech) continue;
    out.push_back(text[i++]);
  }
  std::string collapsed;
  bool space = false;
  for (char c : trim(out)) {
    if (c == ' ') {
      space = true;
      continue;
    }
    if (space) collapsed.push_back(' ');
    space = false;
    collapsed.push_back(c);
  }
  return collapsed;
}

void GateConfig::validate() const {
  if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("tau must lie in (0, 1)");
  if (top_n < 1) throw ConfigError("top_n must be >= 1");
}

EmotionPrediction detect_emotion(const std::string& utterance, const ClassifierBackend& backend,
                                 Diagnostics* diag) {
  try {
    return EmotionPrediction(backend.vocabulary(), backend.predict(utterance));
  } catch (const std::exception& e) {
    if (diag != nullptr) {
      diag->fallbacks.push_back(std::string("emotion: ") + e.what() + "; used uniform distribution");
    }
    return EmotionPrediction::uniform(backend.vocabulary());
  }
}

bool should_empathize(const EmotionPrediction& emotion, const GateConfig& gate) {
  const auto top = emotion.top_k(static_cast<std::size_t>(std::max(1, gate.top_n)));
  if (!gate.valence_allow_list.empty()) {
    const std::string first = to_lower(top.front().first);
    const bool allowed = std::any_of(gate.valence_allow_list.begin(), gate.valence_allow_list.end(),
                                     [&](const std::string& l) { return to_lower(l) == first; });
    if (!allowed) return false;
  }
  double mass = 0.0;
  for (const auto& [label, p] : top) mass += p;
  // strict; sums equal to tau up to rounding do not fire
  return mass > gate.tau + 1e-9;
}

std::string generate_empathetic(const std::string& utterance, MechanismSet mechanisms,
                                const CausalLMBackend& backend, const DecodeOptions& opts,
                                Diagnostics* diag) {
  if (mechanisms.empty()) throw ValidationError("empathetic generation needs a mechanism");
  DecodeOptions capped = opts;
  capped.max_tokens = std::min(opts.max_tokens, kMaxEmpatheticTokens);
  std::string raw;
  try {
    raw = backend.complete(empathy_prompt(escape_special(utterance), mechanisms), capped);
  } catch (const std::exception& e) {
    if (diag != nullptr) diag->fallbacks.push_back(std::string("empathy: ") + e.what() + "; used fallback");
    return std::string(kEmpathyFallback);
  }
  if (auto eos = raw.find(kEos); eos != std::string::npos) raw.resize(eos);
  auto words = split(strip_special_tokens(raw), ' ');
  if (words.size() > static_cast<std::size_t>(kMaxEmpatheticTokens)) {
    words.resize(static_cast<std::size_t>(kMaxEmpatheticTokens));
  }
  std::string text = trim(join(words, " "));
  if (text.empty()) {
    if (diag != nullptr) diag->fallbacks.push_back("empathy: empty continuation; used fallback");
    return std::string(kEmpathyFallback);
  }
  return text;
}

MechanismSet label_mechanisms(const std::string& response, const MultiLabelBackend& backend) {
  if (trim(response).empty()) throw ValidationError("empty response");
  return backend.label(response);
}

}  // namespace goalcoach
