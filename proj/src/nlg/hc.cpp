// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/nlg/hc.hpp"

#include <cctype>

#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"

namespace goalcoach {
namespace {

void note(Diagnostics* diag, std::string msg) {
  if (diag != nullptr) diag->fallbacks.push_back(std::move(msg));
}

struct Bracket {
  std::size_t begin;
  std::size_t end;  // one past ']'
  std::string name;
};

// "[word]" occurrences with word in [A-Za-z_]+.
std::vector<Bracket> find_brackets(std::string_view text) {
  std::vector<Bracket> out;
  std::size_t i = 0;
  while ((i = text.find('[', i)) != std::string_view::npos) {
    std::size_t j = i + 1;
    while (j < text.size() &&
           (std::isalpha(static_cast<unsigned char>(text[j])) != 0 || text[j] == '_')) {
      ++j;
    }
    if (j < text.size() && text[j] == ']' && j > i + 1) {
      out.push_back({i, j + 1, std::string(text.substr(i + 1, j - i - 1))});
      i = j + 1;
    } else {
      i = i + 1;
    }
  }
  return out;
}

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : trim(s)) {
    if (c == ' ') {
      space = true;
      continue;
    }
    if (space && !(c == '.' || c == ',' || c == '?' || c == '!')) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string escape_special(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    out.push_back(text[i]);
    if (text[i] == '<' && i + 1 < text.size() && text[i + 1] == '|') out.push_back(' ');
  }
  return out;
}

std::string render_context(const std::vector<DialogueTurn>& window) {
  std::string out;
  for (const auto& t : window) {
    if (!out.empty()) out += ' ';
    out += t.speaker == Speaker::kCoach ? kCoachMarker : kPatientMarker;
    const std::string text = escape_special(trim(t.text));
    if (!text.empty()) {
      out += ' ';
      out += text;
    }
  }
  return out;
}

std::vector<DialogueTurn> parse_context(std::string_view context_text) {
  std::vector<DialogueTurn> out;
  std::size_t pos = 0;
  auto next_marker = [&](std::size_t from, Speaker* who) -> std::size_t {
    const auto c = context_text.find(kCoachMarker, from);
    const auto p = context_text.find(kPatientMarker, from);
    if (c == std::string_view::npos && p == std::string_view::npos) return std::string_view::npos;
    if (p == std::string_view::npos || (c != std::string_view::npos && c < p)) {
      *who = Speaker::kCoach;
      return c;
    }
    *who = Speaker::kPatient;
    return p;
  };
  Speaker who{};
  pos = next_marker(0, &who);
  if (pos == std::string_view::npos) {
    if (!trim(context_text).empty()) throw ValidationError("context text without speaker markers");
    return out;
  }
  if (!trim(context_text.substr(0, pos)).empty()) throw ValidationError("text before first speaker marker");
  int index = 0;
  while (pos != std::string_view::npos) {
    const std::size_t body = pos + (who == Speaker::kCoach ? kCoachMarker.size() : kPatientMarker.size());
    Speaker next_who{};
    const std::size_t next = next_marker(body, &next_who);
    DialogueTurn t;
    t.speaker = who;
    t.turn_index = index++;
    t.text = trim(context_text.substr(body, next == std::string_view::npos ? std::string_view::npos : next - body));
    out.push_back(std::move(t));
    pos = next;
    who = next_who;
  }
  return out;
}

AssembledInput assemble(std::string_view prefix, const SessionContext& ctx, Stage stage) {
  AssembledInput in;
  in.task_prefix = std::string(prefix);
  in.context_text = render_context(ctx.window);
  in.belief_text = escape_special(serialize_belief(ctx.belief));
  in.stage_token = std::string(stage_token(stage));
  std::string r = in.task_prefix;
  r += kContextSep;
  if (!in.context_text.empty()) r += " " + in.context_text;
  r += ' ';
  r += kBeliefSep;
  if (!in.belief_text.empty()) r += " " + in.belief_text;
  r += ' ';
  r += kStageSep;
  r += ' ';
  r += in.stage_token;
  in.rendered = std::move(r);
  return in;
}

AssembledInput assemble_stage_input(const SessionContext& ctx) {
  return assemble(kStagePrefix, ctx, ctx.previous_stage);
}

AssembledInput assemble_response_input(const SessionContext& ctx, Stage stage) {
  return assemble(kResponsePrefix, ctx, stage);
}

AssembledInput split_assembled(std::string_view rendered) {
  AssembledInput in;
  in.rendered = std::string(rendered);
  const auto c = rendered.find(kContextSep);
  if (c == std::string_view::npos) throw ValidationError("missing context separator");
  in.task_prefix = std::string(rendered.substr(0, c));
  const std::string belief_marker = " " + std::string(kBeliefSep);
  const std::string stage_marker = " " + std::string(kStageSep) + " ";
  const auto b = rendered.find(belief_marker, c);
  if (b == std::string_view::npos) throw ValidationError("missing belief separator");
  const auto s = rendered.find(stage_marker, b);
  if (s == std::string_view::npos) throw ValidationError("missing stage separator");
  auto field = [](std::string_view f) {
    if (f.empty()) return std::string();
    if (f.front() != ' ') throw ValidationError("field not separated by a space");
    return std::string(f.substr(1));
  };
  in.context_text = field(rendered.substr(c + kContextSep.size(), b - c - kContextSep.size()));
  in.belief_text = field(rendered.substr(b + belief_marker.size(), s - b - belief_marker.size()));
  in.stage_token = std::string(rendered.substr(s + stage_marker.size()));
  return in;
}

Stage predict_stage(const SessionContext& ctx, const SeqBackend& backend, Diagnostics* diag,
                    const DecodeOptions& opts) {
  const AssembledInput in = assemble_stage_input(ctx);
  std::string out;
  try {
    out = backend.generate(in.rendered, opts);
  } catch (const std::exception& e) {
    note(diag, std::string("stage: backend failure (") + e.what() + "); kept " +
                   std::string(stage_token(ctx.previous_stage)));
    return ctx.previous_stage;
  }
  if (auto st = parse_stage_token(to_lower(trim(out)))) return *st;
  note(diag, "stage: unparseable backend output '" + out + "'; kept " +
                 std::string(stage_token(ctx.previous_stage)));
  return ctx.previous_stage;
}

std::vector<Slot> DelexResponse::placeholders() const {
  std::vector<Slot> out;
  for (const auto& b : find_brackets(text)) {
    if (auto s = parse_slot(b.name)) out.push_back(*s);
  }
  return out;
}

std::vector<std::string> invalid_placeholders(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& b : find_brackets(text)) {
    if (!parse_slot(b.name)) out.push_back(b.name);
  }
  return out;
}

DelexResponse generate_response(const SessionContext& ctx, Stage stage, const SeqBackend& backend,
                                const DecodeOptions& opts, Diagnostics* diag) {
  const AssembledInput in = assemble_response_input(ctx, stage);
  std::string out;
  try {
    out = backend.generate(in.rendered, opts);
  } catch (const std::exception& e) {
    note(diag, std::string("response: backend failure (") + e.what() + "); used fallback");
    return {std::string(kFallbackResponse)};
  }
  // Drop bracketed words that are not slot placeholders.
  std::string cleaned;
  std::size_t last = 0;
  for (const auto& b : find_brackets(out)) {
    if (parse_slot(b.name)) continue;
    cleaned.append(out, last, b.begin - last);
    last = b.end;
    note(diag, "response: removed invalid placeholder [" + b.name + "]");
  }
  cleaned.append(out, last, std::string::npos);
  cleaned = collapse_spaces(cleaned);
  if (cleaned.empty()) {
    note(diag, "response: empty backend output; used fallback");
    return {std::string(kFallbackResponse)};
  }
  return {cleaned};
}

std::string join_values(const std::vector<std::string>& values) {
  if (values.empty()) return {};
  if (values.size() == 1) return values.front();
  std::string out;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (i) out += ", ";
    out += values[i];
  }
  return out + " and " + values.back();
}

Lexicalized lexicalize(const DelexResponse& response, const BeliefState& belief) {
  Lexicalized out;
  std::size_t last = 0;
  for (const auto& b : find_brackets(response.text)) {
    auto slot = parse_slot(b.name);
    if (!slot) continue;
    out.text.append(response.text, last, b.begin - last);
    if (belief.filled(*slot)) {
      out.text += join_values(belief.values(*slot));
    } else {
      out.text += kUnfilledPhrase;
      out.unfilled.push_back(*slot);
    }
    last = b.end;
  }
  out.text.append(response.text, last, std::string::npos);
  return out;
}

}  // namespace goalcoach
