// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/corpus/import.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include <spdlog/spdlog.h>

#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"

namespace goalcoach {

namespace fs = std::filesystem;

namespace {

std::string week_key(const Json& j) {
  const Json& w = j.contains("week") ? j.at("week") : j.at("week_id");
  return w.is_string() ? w.get<std::string>() : w.dump();
}

std::vector<SlotSpan> spans_for(const std::string& text, const Json& slots, ImportStats* stats) {
  const auto tokens = tokenize(text);
  std::vector<SlotSpan> spans;
  std::vector<std::pair<Slot, std::string>> by_value;
  for (const auto& s : slots) {
    const std::string name = s.at("slot").get<std::string>();
    const auto slot = parse_slot(name);
    if (!slot) throw SchemaError("unknown slot '" + name + "'");
    const std::string value = s.at("value").get<std::string>();
    if (s.contains("char_start") && s.contains("char_end")) {
      const auto b = s.at("char_start").get<std::size_t>();
      const auto e = s.at("char_end").get<std::size_t>();
      int first = -1, last = -1;
      for (std::size_t t = 0; t < tokens.size(); ++t) {
        if (first < 0 && tokens[t].end > b) first = static_cast<int>(t);
        if (tokens[t].begin < e) last = static_cast<int>(t);
      }
      if (first >= 0 && last >= first) {
        spans.push_back(SlotSpan{*slot, value, first, last});
        continue;
      }
    }
    by_value.emplace_back(*slot, value);
  }
  // Keep offset spans first; locate the rest on the remaining tokens.
  std::vector<std::pair<Slot, std::string>> missing;
  for (auto& sp : locate_values(text, by_value, &missing)) {
    const bool overlaps = std::any_of(spans.begin(), spans.end(), [&](const SlotSpan& o) {
      return sp.token_start <= o.token_end && o.token_start <= sp.token_end;
    });
    if (overlaps) {
      missing.emplace_back(sp.slot, sp.value);
      continue;
    }
    spans.push_back(sp);
  }
  std::sort(spans.begin(), spans.end(), [](const SlotSpan& a, const SlotSpan& b) { return a.token_start < b.token_start; });
  // Drop spans that overlap an earlier one.
  std::vector<SlotSpan> out;
  for (const auto& s : spans) {
    if (!out.empty() && s.token_start <= out.back().token_end) {
      missing.emplace_back(s.slot, s.value);
      continue;
    }
    out.push_back(s);
  }
  if (stats) {
    stats->spans += out.size();
    stats->unlocated += missing.size();
  }
  return out;
}

void import_dir(const fs::path& dir, int dataset, Corpus& corpus, std::map<std::string, std::size_t>& index,
                ImportStats* stats) {
  if (!fs::is_directory(dir)) throw SchemaError("dataset directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    const bool goals_file = f.filename() == "goals.jsonl";
    std::ifstream in(f);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      try {
        const Json j = Json::parse(line);
        if (goals_file) {
          GoldGoal g;
          g.week_id = week_key(j);
          const auto p = parse_snapshot_point(j.at("point").get<std::string>());
          if (!p) throw SchemaError("unknown snapshot point");
          g.point = *p;
          g.belief = belief_from_json(j.contains("slots") ? j.at("slots") : j.at("belief"));
          corpus.goals.push_back(std::move(g));
          continue;
        }
        const std::string text = j.at("text").get<std::string>();
        if (trim(text).empty()) continue;
        AnnotatedUtterance u = AnnotatedUtterance::make(text, spans_for(text, j.value("slots", Json::array()), stats));
        u.week_id = week_key(j);
        u.dataset = dataset;
        u.turn_index = j.contains("turn") ? j.at("turn").get<int>() : j.value("turn_index", 0);
        const std::string who = j.contains("speaker") ? j.at("speaker").get<std::string>() : j.at("role").get<std::string>();
        const auto speaker = parse_speaker(to_lower(who));
        if (!speaker) throw SchemaError("unknown speaker '" + who + "'");
        u.speaker = *speaker;
        if (j.contains("stage") && j.at("stage").is_string()) {
          const auto st = parse_stage_token(to_lower(j.at("stage").get<std::string>()));
          if (!st) throw SchemaError("unknown stage " + j.at("stage").dump());
          u.stage = *st;
        } else if (dataset == 2) {
          throw SchemaError("dataset 2 records need a stage");
        }
        if (j.contains("phase") && j.at("phase").is_string()) u.phase = j.at("phase").get<std::string>();
        if (j.contains("acts") && j.at("acts").is_array()) u.acts = j.at("acts").get<std::vector<std::string>>();
        auto [it, fresh] = index.emplace(u.week_id, corpus.weeks.size());
        if (fresh) corpus.weeks.push_back(Week{u.week_id, dataset, {}});
        corpus.weeks[it->second].turns.push_back(std::move(u));
        if (stats) ++stats->utterances;
      } catch (const Json::exception& e) {
        throw SchemaError(f.filename().string() + ": " + e.what(), lineno);
      } catch (const SchemaError& e) {
        throw SchemaError(f.filename().string() + ": " + e.what(), lineno);
      } catch (const Error& e) {
        throw SchemaError(f.filename().string() + ": " + e.what(), lineno);
      }
    }
  }
}

}  // namespace

Corpus import_release(const fs::path& dataset1, const fs::path& dataset2, ImportStats* stats) {
  Corpus c;
  std::map<std::string, std::size_t> index;
  if (!dataset1.empty()) import_dir(dataset1, 1, c, index, stats);
  if (!dataset2.empty()) import_dir(dataset2, 2, c, index, stats);
  for (auto& w : c.weeks) {
    std::stable_sort(w.turns.begin(), w.turns.end(),
                     [](const AnnotatedUtterance& a, const AnnotatedUtterance& b) { return a.turn_index < b.turn_index; });
    for (std::size_t i = 1; i < w.turns.size(); ++i) {
      if (w.turns[i].turn_index == w.turns[i - 1].turn_index) {
        throw SchemaError("duplicate turn " + std::to_string(w.turns[i].turn_index) + " in week " + w.week_id);
      }
    }
  }
  if (stats && stats->unlocated > 0) spdlog::warn("{} slot values could not be located in their text", stats->unlocated);
  return c;
}

}  // namespace goalcoach
