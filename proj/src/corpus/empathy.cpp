// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/corpus/empathy.hpp"

#include <fstream>
#include <map>

#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"
#include "goalcoach/corpus/csv.hpp"

namespace goalcoach {

namespace fs = std::filesystem;

namespace {

std::string unescape_ed(std::string s) {
  static const std::string kComma = "_comma_";
  std::size_t pos = 0;
  while ((pos = s.find(kComma, pos)) != std::string::npos) {
    s.replace(pos, kComma.size(), ",");
    pos += 1;
  }
  return trim(s);
}

std::string clean_payload(std::string_view s) {
  std::string out;
  for (char c : s) out += (c == '\n' || c == '\r' || c == '\t') ? ' ' : c;
  return strip_special_tokens(out);
}

}  // namespace

std::vector<EdPair> read_ed_pairs(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw SchemaError("cannot open " + file.string());
  std::vector<EdPair> out;
  std::string line;
  std::size_t lineno = 0;
  std::string prev_conv, prev_utt, prev_emotion;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && starts_with_ci(line, "conv_id")) continue;
    if (trim(line).empty()) continue;
    const auto f = split_plain_csv_line(line);
    if (f.size() < 6) throw SchemaError(file.filename().string() + ": expected at least 6 fields", lineno);
    const std::string conv = trim(f[0]);
    if (conv.empty()) throw SchemaError(file.filename().string() + ": blank conv_id", lineno);
    const std::string utt = unescape_ed(f[5]);
    if (conv == prev_conv && !prev_utt.empty() && !utt.empty()) {
      out.push_back(EdPair{conv, prev_utt, utt, prev_emotion});
    }
    prev_conv = conv;
    prev_utt = utt;
    prev_emotion = trim(f[2]);
  }
  return out;
}

EpitomeData read_epitome(const fs::path& dir) {
  static const std::pair<const char*, Mechanism> kFiles[] = {
      {"emotional-reactions-reddit.csv", Mechanism::kEmotionalReaction},
      {"interpretations-reddit.csv", Mechanism::kInterpretation},
      {"explorations-reddit.csv", Mechanism::kExploration},
  };
  struct Acc {
    std::string text;
    MechanismSet mechanisms;
    double level_sum = 0.0;
    int files = 0;
  };
  std::map<std::string, Acc> by_id;
  std::vector<std::string> order;
  for (const auto& [name, mechanism] : kFiles) {
    const fs::path file = dir / name;
    if (!fs::exists(file)) continue;
    std::ifstream in(file);
    const auto rows = read_csv(in);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      if (i == 0 && !r.fields.empty() && r.fields[0] == "sp_id") continue;
      if (r.fields.size() < 5) throw SchemaError(std::string(name) + ": expected at least 5 fields", r.line);
      const std::string rp_id = trim(r.fields[1]);
      const std::string level_text = trim(r.fields[4]);
      if (level_text != "0" && level_text != "1" && level_text != "2") {
        throw SchemaError(std::string(name) + ": level must be 0, 1 or 2", r.line);
      }
      const int level = level_text[0] - '0';
      auto [it, fresh] = by_id.try_emplace(rp_id);
      if (fresh) {
        order.push_back(rp_id);
        it->second.text = clean_payload(r.fields[3]);
      }
      if (level > 0) it->second.mechanisms.insert(mechanism);
      it->second.level_sum += level;
      it->second.files += 1;
    }
  }
  EpitomeData out;
  for (const auto& id : order) {
    const Acc& a = by_id.at(id);
    if (a.text.empty()) continue;
    out.mechanisms.push_back(MechanismExample{a.text, a.mechanisms});
    out.levels.push_back(ScoredText{a.text, a.level_sum / a.files});
  }
  return out;
}

std::vector<EmpathySample> EmpathyCorpus::split(const std::string& name) const {
  std::vector<EmpathySample> out;
  for (const auto& s : samples) {
    if (s.split == name) out.push_back(s.sample);
  }
  return out;
}

EmpathyCorpus build_empathy_corpus(const fs::path& ed_dir, const fs::path& epitome_dir,
                                   const MultiLabelBackend& labeler) {
  EmpathyCorpus c;
  static const std::pair<const char*, const char*> kSplits[] = {
      {"train.csv", "train"}, {"valid.csv", "dev"}, {"test.csv", "test"}};
  for (const auto& [file, split] : kSplits) {
    if (!fs::exists(ed_dir / file)) continue;
    for (const auto& p : read_ed_pairs(ed_dir / file)) {
      EmpathySample s{clean_payload(p.utterance), clean_payload(p.response), {}};
      if (s.utterance.empty() || s.response.empty()) continue;
      s.mechanisms = label_mechanisms(s.response, labeler);
      if (s.mechanisms.empty()) {
        ++c.dropped;
        continue;
      }
      try {
        (void)encode_training_sequence(s);
      } catch (const CodecError&) {
        ++c.dropped;
        continue;
      }
      c.samples.push_back(SilverSample{std::move(s), p.emotion, split});
    }
  }
  if (!epitome_dir.empty() && fs::exists(epitome_dir)) c.epitome = read_epitome(epitome_dir);
  return c;
}

void write_silver(const std::vector<SilverSample>& samples, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw ConfigError("cannot write " + file.string());
  for (const auto& s : samples) {
    out << Json{{"utterance", s.sample.utterance},
                {"response", s.sample.response},
                {"mechanisms", mechanisms_to_json(s.sample.mechanisms)},
                {"emotion_label", s.emotion},
                {"split", s.split}}
               .dump()
        << '\n';
  }
}

namespace {

template <typename Fn>
void read_jsonl(const fs::path& file, Fn&& fn) {
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
    } catch (const ValidationError& e) {
      throw SchemaError(file.filename().string() + ": " + e.what(), lineno);
    }
  }
}

}  // namespace

std::vector<SilverSample> read_silver(const fs::path& file) {
  std::vector<SilverSample> out;
  read_jsonl(file, [&](const Json& j) {
    SilverSample s;
    s.sample.utterance = j.at("utterance").get<std::string>();
    s.sample.response = j.at("response").get<std::string>();
    s.sample.mechanisms = mechanisms_from_json(j.at("mechanisms"));
    s.emotion = j.value("emotion_label", "");
    s.split = j.value("split", "train");
    out.push_back(std::move(s));
  });
  return out;
}

std::vector<EmpathySample> read_few_shot(const fs::path& file) {
  std::vector<EmpathySample> out;
  read_jsonl(file, [&](const Json& j) {
    EmpathySample s;
    s.utterance = j.at("utterance").get<std::string>();
    s.response = j.at("response").get<std::string>();
    s.mechanisms = mechanisms_from_json(j.at("mechanisms"));
    out.push_back(std::move(s));
  });
  return out;
}

}  // namespace goalcoach
