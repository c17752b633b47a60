// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/corpus/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"
#include "goalcoach/nlg/hc.hpp"
#include "goalcoach/nlu/nlu.hpp"

namespace goalcoach {

namespace fs = std::filesystem;

AnnotatedUtterance AnnotatedUtterance::make(std::string text, const std::vector<SlotSpan>& spans) {
  AnnotatedUtterance u;
  u.text = std::move(text);
  for (const auto& t : tokenize(u.text)) u.tokens.push_back(t.text);
  try {
    u.bio_labels = encode_spans(u.tokens.size(), spans);
  } catch (const Error& e) {
    throw SchemaError(std::string("spans: ") + e.what());
  }
  return u;
}

std::vector<SlotSpan> AnnotatedUtterance::spans() const {
  return decode_bio(tokenize(text), bio_labels, text);
}

bool AnnotatedUtterance::has_spans() const {
  return std::any_of(bio_labels.begin(), bio_labels.end(), [](const std::string& l) { return l != "O"; });
}

std::size_t Corpus::utterance_count() const {
  std::size_t n = 0;
  for (const auto& w : weeks) n += w.turns.size();
  return n;
}

const Week* Corpus::find_week(const std::string& id) const {
  for (const auto& w : weeks) {
    if (w.week_id == id) return &w;
  }
  return nullptr;
}

std::optional<GoldGoal> Corpus::goal(const std::string& week_id, SnapshotPoint point) const {
  for (const auto& g : goals) {
    if (g.week_id == week_id && g.point == point) return g;
  }
  return std::nullopt;
}

Json utterance_to_json(const AnnotatedUtterance& u) {
  Json spans = Json::array();
  for (const auto& s : u.spans()) {
    spans.push_back({{"slot", slot_name(s.slot)}, {"start", s.token_start}, {"end", s.token_end}});
  }
  Json j = {{"week", u.week_id},
            {"dataset", u.dataset},
            {"turn", u.turn_index},
            {"speaker", speaker_name(u.speaker)},
            {"text", u.text},
            {"spans", spans}};
  if (u.stage) j["stage"] = stage_token(*u.stage);
  if (u.phase) j["phase"] = *u.phase;
  if (!u.acts.empty()) j["acts"] = u.acts;
  if (u.belief) j["belief"] = belief_to_json(*u.belief);
  return j;
}

AnnotatedUtterance utterance_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw SchemaError("record is not an object");
    const std::string text = j.at("text").get<std::string>();
    if (trim(text).empty()) throw SchemaError("empty text");
    std::vector<SlotSpan> spans;
    for (const auto& s : j.value("spans", Json::array())) {
      const std::string name = s.at("slot").get<std::string>();
      const auto slot = parse_slot(name);
      if (!slot) throw SchemaError("unknown slot '" + name + "'");
      SlotSpan sp;
      sp.slot = *slot;
      sp.token_start = s.at("start").get<int>();
      sp.token_end = s.at("end").get<int>();
      spans.push_back(sp);
    }
    AnnotatedUtterance u = AnnotatedUtterance::make(text, spans);
    u.week_id = j.at("week").is_string() ? j.at("week").get<std::string>() : j.at("week").dump();
    u.dataset = j.value("dataset", 1);
    if (u.dataset != 1 && u.dataset != 2) throw SchemaError("dataset must be 1 or 2");
    u.turn_index = j.value("turn", 0);
    const auto speaker = parse_speaker(j.at("speaker").get<std::string>());
    if (!speaker) throw SchemaError("unknown speaker " + j.at("speaker").dump());
    u.speaker = *speaker;
    if (j.contains("stage") && !j.at("stage").is_null()) {
      const auto stage = parse_stage_token(j.at("stage").get<std::string>());
      if (!stage) throw SchemaError("unknown stage " + j.at("stage").dump());
      u.stage = *stage;
    } else if (u.dataset == 2) {
      throw SchemaError("dataset 2 records need a stage");
    }
    if (j.contains("phase") && j.at("phase").is_string()) u.phase = j.at("phase").get<std::string>();
    if (j.contains("acts")) u.acts = j.at("acts").get<std::vector<std::string>>();
    if (j.contains("belief") && !j.at("belief").is_null()) {
      try {
        u.belief = belief_from_json(j.at("belief"));
      } catch (const MalformedBelief& e) {
        throw SchemaError(std::string("belief: ") + e.what());
      }
    }
    return u;
  } catch (const Json::exception& e) {
    throw SchemaError(e.what());
  }
}

namespace {

template <typename Fn>
void for_each_line(const fs::path& file, Fn&& fn) {
  std::ifstream in(file);
  if (!in) throw SchemaError("cannot open " + file.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      fn(Json::parse(line));
    } catch (const Json::exception& e) {
      throw SchemaError(file.filename().string() + ": " + e.what(), lineno);
    } catch (const SchemaError& e) {
      throw SchemaError(file.filename().string() + ": " + e.what(), lineno);
    } catch (const Error& e) {
      throw SchemaError(file.filename().string() + ": " + e.what(), lineno);
    }
  }
}

}  // namespace

Corpus load_corpus(const fs::path& path) {
  Corpus c;
  fs::path utterances = path;
  fs::path goals;
  if (fs::is_directory(path)) {
    utterances = path / "utterances.jsonl";
    goals = path / "goals.jsonl";
  }
  std::map<std::string, std::size_t> index;
  for_each_line(utterances, [&](const Json& j) {
    AnnotatedUtterance u = utterance_from_json(j);
    auto [it, fresh] = index.emplace(u.week_id, c.weeks.size());
    if (fresh) c.weeks.push_back(Week{u.week_id, u.dataset, {}});
    Week& w = c.weeks[it->second];
    if (w.dataset != u.dataset) throw SchemaError("week " + w.week_id + " mixes datasets");
    if (!w.turns.empty() && u.turn_index <= w.turns.back().turn_index) {
      throw SchemaError("turn indices must increase within week " + w.week_id);
    }
    w.turns.push_back(std::move(u));
  });
  if (!goals.empty() && fs::exists(goals)) {
    for_each_line(goals, [&](const Json& j) {
      GoldGoal g;
      g.week_id = j.at("week").get<std::string>();
      const auto point = parse_snapshot_point(j.at("point").get<std::string>());
      if (!point) throw SchemaError("unknown snapshot point " + j.at("point").dump());
      g.point = *point;
      try {
        g.belief = belief_from_json(j.at("belief"));
      } catch (const MalformedBelief& e) {
        throw SchemaError(e.what());
      }
      c.goals.push_back(std::move(g));
    });
  }
  return c;
}

void write_corpus(const Corpus& corpus, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream out(dir / "utterances.jsonl");
  if (!out) throw ConfigError("cannot write " + (dir / "utterances.jsonl").string());
  for (const auto& w : corpus.weeks) {
    for (const auto& u : w.turns) out << utterance_to_json(u).dump() << '\n';
  }
  std::ofstream g(dir / "goals.jsonl");
  for (const auto& goal : corpus.goals) {
    g << Json{{"week", goal.week_id}, {"point", snapshot_point_name(goal.point)}, {"belief", belief_to_json(goal.belief)}}.dump()
      << '\n';
  }
}

CorpusSplit split_corpus(const Corpus& corpus, double dev_fraction) {
  if (dev_fraction < 0.0 || dev_fraction >= 1.0) throw ConfigError("dev_fraction must lie in [0, 1)");
  CorpusSplit s;
  std::vector<const Week*> d1;
  for (const auto& w : corpus.weeks) {
    if (w.dataset == 2) {
      s.test.weeks.push_back(w);
    } else {
      d1.push_back(&w);
    }
  }
  std::stable_sort(d1.begin(), d1.end(),
                   [](const Week* a, const Week* b) { return fnv1a64(a->week_id) < fnv1a64(b->week_id); });
  const auto n_dev = static_cast<std::size_t>(std::lround(dev_fraction * static_cast<double>(d1.size())));
  for (std::size_t i = 0; i < d1.size(); ++i) (i < n_dev ? s.dev : s.train).weeks.push_back(*d1[i]);
  auto route_goals = [&](Corpus& part) {
    for (const auto& g : corpus.goals) {
      if (part.find_week(g.week_id) != nullptr) part.goals.push_back(g);
    }
  };
  route_goals(s.train);
  route_goals(s.dev);
  route_goals(s.test);
  return s;
}

std::vector<SlotSpan> locate_values(std::string_view text, const std::vector<std::pair<Slot, std::string>>& values,
                                    std::vector<std::pair<Slot, std::string>>* missing) {
  const auto tokens = tokenize(text);
  std::vector<std::string> lowered;
  for (const auto& t : tokens) lowered.push_back(to_lower(t.text));
  std::vector<bool> used(tokens.size(), false);
  std::vector<SlotSpan> out;
  for (const auto& [slot, value] : values) {
    std::vector<std::string> needle;
    for (const auto& t : tokenize(to_lower(value))) needle.push_back(t.text);
    bool found = false;
    if (!needle.empty()) {
      for (std::size_t i = 0; i + needle.size() <= tokens.size() && !found; ++i) {
        bool ok = true;
        for (std::size_t k = 0; k < needle.size() && ok; ++k) ok = !used[i + k] && lowered[i + k] == needle[k];
        if (!ok) continue;
        for (std::size_t k = 0; k < needle.size(); ++k) used[i + k] = true;
        SlotSpan sp;
        sp.slot = slot;
        sp.token_start = static_cast<int>(i);
        sp.token_end = static_cast<int>(i + needle.size() - 1);
        sp.value = std::string(text.substr(tokens[i].begin, tokens[i + needle.size() - 1].end - tokens[i].begin));
        out.push_back(sp);
        found = true;
      }
    }
    if (!found && missing != nullptr) missing->emplace_back(slot, value);
  }
  std::sort(out.begin(), out.end(), [](const SlotSpan& a, const SlotSpan& b) { return a.token_start < b.token_start; });
  return out;
}

std::string delexicalize_text(std::string_view text, const std::vector<SlotSpan>& input) {
  const auto tokens = tokenize(text);
  std::vector<SlotSpan> spans = input;
  std::sort(spans.begin(), spans.end(), [](const SlotSpan& a, const SlotSpan& b) { return a.token_start < b.token_start; });
  std::string out;
  std::size_t pos = 0;
  int last_end = -1;
  for (const auto& s : spans) {
    if (s.token_start < 0 || s.token_end < s.token_start || s.token_end >= static_cast<int>(tokens.size())) {
      throw SchemaError("span out of range");
    }
    if (s.token_start <= last_end) throw SchemaError("overlapping spans");
    const std::size_t b = tokens[static_cast<std::size_t>(s.token_start)].begin;
    const std::size_t e = tokens[static_cast<std::size_t>(s.token_end)].end;
    out.append(text.substr(pos, b - pos));
    out += "[" + std::string(slot_name(s.slot)) + "]";
    pos = e;
    last_end = s.token_end;
  }
  out.append(text.substr(pos));
  return out;
}

Corpus delexicalize_targets(const Corpus& corpus) {
  Corpus out = corpus;
  for (auto& w : out.weeks) {
    for (auto& u : w.turns) {
      if (u.speaker != Speaker::kCoach || !u.has_spans()) continue;
      u.text = delexicalize_text(u.text, u.spans());
      u.tokens.clear();
      for (const auto& t : tokenize(u.text)) u.tokens.push_back(t.text);
      u.bio_labels.assign(u.tokens.size(), "O");
    }
  }
  return out;
}

std::vector<BIOSequence> tagger_examples(const Corpus& corpus, bool slot_bearing_only) {
  std::vector<BIOSequence> out;
  for (const auto& w : corpus.weeks) {
    for (const auto& u : w.turns) {
      if (slot_bearing_only && !u.has_spans()) continue;
      out.push_back(BIOSequence{u.tokens, u.bio_labels});
    }
  }
  return out;
}

std::vector<BeliefState> gold_beliefs(const Week& week) {
  const bool annotated = std::any_of(week.turns.begin(), week.turns.end(),
                                     [](const AnnotatedUtterance& u) { return u.belief.has_value(); });
  std::vector<BeliefState> out;
  BeliefState cur;
  for (const auto& u : week.turns) {
    if (annotated) {
      if (u.belief) cur = *u.belief;
    } else if (u.speaker == Speaker::kPatient) {
      cur = rule_update(cur, u.spans());
    }
    out.push_back(cur);
  }
  return out;
}

namespace {

bool same_values(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() != b.size()) return false;
  std::vector<std::string> x, y;
  for (const auto& v : a) x.push_back(normalize_value(v));
  for (const auto& v : b) y.push_back(normalize_value(v));
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

DialogueTurn as_turn(const AnnotatedUtterance& u) {
  return DialogueTurn{u.speaker, u.text, u.turn_index, u.stage};
}

}  // namespace

std::vector<CarryoverExample> mine_collisions(const Corpus& corpus) {
  std::vector<CarryoverExample> out;
  for (const auto& w : corpus.weeks) {
    const bool annotated = std::any_of(w.turns.begin(), w.turns.end(),
                                       [](const AnnotatedUtterance& u) { return u.belief.has_value(); });
    if (!annotated) continue;
    const auto beliefs = gold_beliefs(w);
    std::vector<DialogueTurn> seen;
    BeliefState prev;
    Stage prev_stage = Stage::kGoalSetting;
    for (std::size_t i = 0; i < w.turns.size(); ++i) {
      const auto& u = w.turns[i];
      const DialogueTurn turn = as_turn(u);
      if (u.speaker == Speaker::kPatient && u.has_spans()) {
        const auto spans = u.spans();
        const BeliefState& after = beliefs[i];
        for (Slot s : detect_collisions(prev, spans)) {
          std::vector<std::string> proposed;
          for (const auto& sp : spans) {
            if (sp.slot == s && std::none_of(proposed.begin(), proposed.end(), [&](const std::string& v) {
                  return normalize_value(v) == normalize_value(sp.value);
                })) {
              proposed.push_back(sanitize_value(sp.value));
            }
          }
          CarryoverExample ex;
          ex.query.slot = s;
          ex.query.previous_values = prev.values(s);
          ex.query.proposed_values = proposed;
          ex.query.context = SessionContext{context_window(seen, turn), prev_stage, prev};
          if (same_values(after.values(s), prev.values(s))) {
            ex.keep_previous = true;
          } else if (same_values(after.values(s), proposed)) {
            ex.keep_previous = false;
          } else {
            continue;
          }
          out.push_back(std::move(ex));
        }
      }
      prev = beliefs[i];
      if (u.stage) prev_stage = *u.stage;
      seen.push_back(turn);
    }
  }
  return out;
}

std::vector<SeqExample> seq_examples(const Corpus& corpus) {
  std::vector<SeqExample> out;
  for (const auto& w : corpus.weeks) {
    const auto beliefs = gold_beliefs(w);
    std::vector<DialogueTurn> seen;
    Stage prev_stage = Stage::kGoalSetting;
    for (std::size_t i = 0; i < w.turns.size(); ++i) {
      const auto& u = w.turns[i];
      if (!u.stage) {
        throw SchemaError("week " + w.week_id + " turn " + std::to_string(u.turn_index) + " has no stage label");
      }
      const DialogueTurn turn = as_turn(u);
      if (u.speaker == Speaker::kPatient && i + 1 < w.turns.size() && w.turns[i + 1].speaker == Speaker::kCoach) {
        const auto& reply = w.turns[i + 1];
        if (!reply.stage) {
          throw SchemaError("week " + w.week_id + " turn " + std::to_string(reply.turn_index) + " has no stage label");
        }
        SessionContext ctx{context_window(seen, turn), prev_stage, beliefs[i]};
        out.push_back({assemble_stage_input(ctx).rendered, std::string(stage_token(*reply.stage))});
        const std::string target = reply.has_spans() ? delexicalize_text(reply.text, reply.spans()) : reply.text;
        out.push_back({assemble_response_input(ctx, *reply.stage).rendered, target});
      }
      prev_stage = *u.stage;
      seen.push_back(turn);
    }
  }
  return out;
}

}  // namespace goalcoach
