// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/corpus/augment.hpp"

#include <algorithm>
#include <set>

#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"

namespace goalcoach {

void AugmentationRecipe::validate() const {
  if (max_variants < 1) throw ConfigError("max_variants must be >= 1");
  for (const auto& [slot, values] : value_alternatives) {
    if (values.empty()) throw ConfigError("no alternatives listed for slot " + std::string(slot_name(slot)));
    for (const auto& v : values) {
      if (trim(v).empty()) throw ConfigError("blank alternative for slot " + std::string(slot_name(slot)));
    }
  }
}

AugmentationRecipe AugmentationRecipe::from_json(const Json& j) {
  AugmentationRecipe r;
  try {
    r.max_variants = j.value("max_variants", r.max_variants);
    const Json alts = j.value("alternatives", Json::object());
    for (const auto& [name, values] : alts.items()) {
      const auto slot = parse_slot(name);
      if (!slot) throw ConfigError("unknown slot '" + name + "' in augmentation recipe");
      r.value_alternatives[*slot] = values.get<std::vector<std::string>>();
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("augmentation recipe: ") + e.what());
  }
  r.validate();
  return r;
}

Json AugmentationRecipe::to_json() const {
  Json alts = Json::object();
  for (const auto& [slot, values] : value_alternatives) alts[std::string(slot_name(slot))] = values;
  return {{"max_variants", max_variants}, {"alternatives", alts}};
}

AnnotatedUtterance substitute_values(const AnnotatedUtterance& u, const std::vector<std::string>& values) {
  const auto tokens = tokenize(u.text);
  const auto spans = u.spans();
  if (values.size() != spans.size()) throw ValidationError("one value per span expected");
  std::string text;
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const std::size_t b = tokens[static_cast<std::size_t>(spans[i].token_start)].begin;
    const std::size_t e = tokens[static_cast<std::size_t>(spans[i].token_end)].end;
    text += u.text.substr(pos, b - pos);
    ranges.emplace_back(text.size(), text.size() + values[i].size());
    text += values[i];
    pos = e;
  }
  text += u.text.substr(pos);

  const auto fresh = tokenize(text);
  std::vector<SlotSpan> out;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    int first = -1, last = -1;
    for (std::size_t t = 0; t < fresh.size(); ++t) {
      if (fresh[t].begin == ranges[i].first) first = static_cast<int>(t);
      if (fresh[t].end == ranges[i].second) last = static_cast<int>(t);
    }
    if (first < 0 || last < first) {
      throw ValidationError("value '" + values[i] + "' does not align with token boundaries");
    }
    out.push_back(SlotSpan{spans[i].slot, values[i], first, last});
  }
  AnnotatedUtterance v = u;
  AnnotatedUtterance built = AnnotatedUtterance::make(text, out);
  v.text = built.text;
  v.tokens = built.tokens;
  v.bio_labels = built.bio_labels;
  v.belief.reset();
  return v;
}

namespace {

AnnotatedUtterance relocate(const AnnotatedUtterance& base, const std::string& text,
                            const std::vector<SlotSpan>& wanted, bool* ok) {
  std::vector<std::pair<Slot, std::string>> values;
  for (const auto& s : wanted) values.emplace_back(s.slot, s.value);
  std::vector<std::pair<Slot, std::string>> missing;
  const auto spans = locate_values(text, values, &missing);
  *ok = missing.empty();
  if (!*ok) return base;
  AnnotatedUtterance v = base;
  AnnotatedUtterance built = AnnotatedUtterance::make(text, spans);
  v.text = built.text;
  v.tokens = built.tokens;
  v.bio_labels = built.bio_labels;
  return v;
}

}  // namespace

std::vector<AnnotatedUtterance> augment(const AnnotatedUtterance& u, const AugmentationRecipe& r, std::uint64_t seed) {
  r.validate();
  const auto spans = u.spans();
  if (spans.empty()) throw PreconditionError("augmentation needs an utterance with at least one slot span");

  std::vector<AnnotatedUtterance> out;
  std::set<std::string> seen{u.text};
  for (int k = 0; k < r.max_variants; ++k) {
    const std::uint64_t vseed = mix_seed(seed, static_cast<std::uint64_t>(k));
    std::vector<std::string> values;
    for (std::size_t i = 0; i < spans.size(); ++i) {
      const auto it = r.value_alternatives.find(spans[i].slot);
      if (it == r.value_alternatives.end()) {
        values.push_back(spans[i].value);
        continue;
      }
      std::vector<std::string> pool;
      for (const auto& alt : it->second) {
        if (normalize_value(alt) != normalize_value(spans[i].value)) pool.push_back(alt);
      }
      if (pool.empty()) pool = it->second;
      values.push_back(pool[mix_seed(vseed, i) % pool.size()]);
    }

    AnnotatedUtterance sub;
    try {
      sub = substitute_values(u, values);
    } catch (const Error&) {
      continue;
    }
    AnnotatedUtterance variant = sub;
    if (r.paraphraser) {
      try {
        const std::string para = trim(r.paraphraser->paraphrase(sub.text, mix_seed(vseed, 0xAAu)));
        if (para.empty()) throw ParaphraserFailure("empty paraphrase");
        bool ok = false;
        variant = relocate(sub, para, sub.spans(), &ok);
        if (!ok) continue;  // a value was lost in paraphrasing
      } catch (const ParaphraserFailure&) {
        variant = sub;
      }
    }
    if (!seen.insert(variant.text).second) continue;
    out.push_back(std::move(variant));
  }
  return out;
}

std::map<Slot, std::vector<std::string>> harvest_alternatives(const Corpus& c) {
  std::map<Slot, std::vector<std::string>> out;
  std::map<Slot, std::set<std::string>> seen;
  for (const auto& w : c.weeks) {
    for (const auto& u : w.turns) {
      for (const auto& s : u.spans()) {
        if (seen[s.slot].insert(normalize_value(s.value)).second) out[s.slot].push_back(s.value);
      }
    }
  }
  return out;
}

std::vector<AnnotatedUtterance> augment_corpus(const Corpus& c, const AugmentationRecipe& r, std::uint64_t seed) {
  std::vector<AnnotatedUtterance> out;
  for (const auto& w : c.weeks) {
    for (const auto& u : w.turns) {
      if (!u.has_spans()) continue;
      const std::uint64_t s = mix_seed(mix_seed(seed, fnv1a64(w.week_id)), static_cast<std::uint64_t>(u.turn_index));
      for (auto& v : augment(u, r, s)) out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace goalcoach
