// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/backends/trainable.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"
#include "goalcoach/nlg/hc.hpp"

namespace goalcoach {
namespace {

namespace fs = std::filesystem;

BackendSpec trained_spec(BackendKind kind, const TrainRecipe& r) {
  BackendSpec s;
  s.kind = kind;
  s.identity = "trainable/" + std::string(backend_kind_name(kind)) + "@" + r.family;
  s.config = {{"dim_bits", r.dim_bits}, {"max_length", r.max_length}, {"seed", r.seed}};
  return s;
}

void check_size(std::size_t n, const TrainRecipe& r, const char* what) {
  if (n < static_cast<std::size_t>(std::max(1, r.min_examples))) {
    throw DataTooSmall(std::string(what) + ": " + std::to_string(n) + " examples, need at least " +
                       std::to_string(std::max(1, r.min_examples)));
  }
}

void save_model(const HashedLinearModel& m, const fs::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + file.string());
  m.save(out);
}

HashedLinearModel load_model(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw SchemaError("missing payload " + file.string());
  return HashedLinearModel::load(in);
}

void save_json(const Json& j, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw ConfigError("cannot write " + file.string());
  out << j.dump() << '\n';
}

Json load_json(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw SchemaError("missing payload " + file.string());
  try {
    Json j;
    in >> j;
    return j;
  } catch (const Json::exception& e) {
    throw SchemaError(file.string() + ": " + e.what());
  }
}

std::string shape(std::string_view w) {
  std::string s;
  for (char c : w) {
    const auto u = static_cast<unsigned char>(c);
    char k = std::isdigit(u) ? 'd' : std::isupper(u) ? 'X' : std::isalpha(u) ? 'x' : c;
    if (s.empty() || s.back() != k) s.push_back(k);
  }
  return s;
}

std::vector<std::string> lowered_words(std::string_view text) { return tokenize_words(to_lower(text)); }

// ---------------------------------------------------------------------------
// tagger features

std::vector<Feature> token_features(const std::vector<std::string>& lw, const std::vector<std::string>& raw,
                                    std::size_t i, int dim_bits) {
  FeatureBuilder f(dim_bits);
  auto at = [&](long j) -> std::string {
    if (j < 0) return "<s>";
    if (j >= static_cast<long>(lw.size())) return "</s>";
    return lw[static_cast<std::size_t>(j)];
  };
  const long li = static_cast<long>(i);
  const std::string& w = lw[i];
  f.add("bias");
  f.add("w", w);
  f.add("shape", shape(raw[i]));
  f.add("suf3", w.size() > 3 ? w.substr(w.size() - 3) : w);
  f.add("pre3", w.substr(0, 3));
  f.add("w-1", at(li - 1));
  f.add("w+1", at(li + 1));
  f.add("w-2", at(li - 2));
  f.add("w+2", at(li + 2));
  f.add("w-1|w", at(li - 1) + "|" + w);
  f.add("w|w+1", w + "|" + at(li + 1));
  f.add("w-2|w-1", at(li - 2) + "|" + at(li - 1));
  f.add("w+1|w+2", at(li + 1) + "|" + at(li + 2));
  f.add("s-1|w", (li > 0 ? shape(raw[i - 1]) : "<s>") + "|" + w);
  f.add("w|s+1", w + "|" + (i + 1 < raw.size() ? shape(raw[i + 1]) : "</s>"));
  return f.take();
}

std::vector<std::vector<Feature>> sentence_features(const std::vector<std::string>& tokens, int dim_bits) {
  std::vector<std::string> lw;
  lw.reserve(tokens.size());
  for (const auto& t : tokens) lw.push_back(to_lower(t));
  std::vector<std::vector<Feature>> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) out.push_back(token_features(lw, tokens, i, dim_bits));
  return out;
}

bool transition_ok(const BioTag& prev, bool has_prev, const BioTag& cur) {
  if (cur.kind != BioTag::Kind::kInside) return true;
  return has_prev && prev.kind != BioTag::Kind::kOutside && prev.slot == cur.slot;
}

// ---------------------------------------------------------------------------
// carryover features

std::vector<Feature> carryover_features(const CarryoverQuery& q, int dim_bits) {
  FeatureBuilder f(dim_bits);
  const std::string slot(slot_name(q.slot));
  const std::string patient = to_lower(q.context.patient_text());
  const std::string coach = to_lower(q.context.coach_text());
  f.add("bias");
  f.add("slot", slot);
  f.add("stage", stage_token(q.context.previous_stage));
  f.add("stage|slot", std::string(stage_token(q.context.previous_stage)) + "|" + slot);
  auto mentioned = [](const std::string& text, const std::vector<std::string>& values) {
    return std::any_of(values.begin(), values.end(),
                       [&](const std::string& v) { return contains_phrase(text, to_lower(v)); });
  };
  f.add("prev_in_coach", mentioned(coach, q.previous_values) ? "1" : "0");
  f.add("new_in_coach", mentioned(coach, q.proposed_values) ? "1" : "0");
  const auto pw = tokenize_words(patient);
  for (std::size_t i = 0; i < pw.size(); ++i) {
    f.add("p", pw[i]);
    if (i + 1 < pw.size()) f.add("pp", pw[i] + " " + pw[i + 1]);
  }
  const auto cw = tokenize_words(coach);
  for (std::size_t i = 0; i < cw.size(); ++i) {
    f.add("c", cw[i]);
    if (i + 1 < cw.size()) f.add("cc", cw[i] + " " + cw[i + 1]);
  }
  return f.take();
}

// ---------------------------------------------------------------------------
// stage features

std::vector<Feature> stage_features(const AssembledInput& in, int dim_bits) {
  FeatureBuilder f(dim_bits);
  const std::string prev = in.stage_token;
  f.add("bias");
  f.add("prev", prev);
  BeliefState b;
  try {
    b = parse_belief(in.belief_text);
  } catch (const MalformedBelief&) {
  }
  int filled = 0;
  for (Slot s : kAllSlots) {
    if (b.filled(s)) {
      f.add("filled", slot_name(s));
      ++filled;
    }
  }
  const bool quantity = b.filled(Slot::kAmount) || b.filled(Slot::kDuration) || b.filled(Slot::kDistance);
  const bool days = b.filled(Slot::kDayname) || b.filled(Slot::kDaynumber) || b.filled(Slot::kRepeatation);
  const std::string core = std::string(b.filled(Slot::kActivity) ? "a" : "-") + (quantity ? "q" : "-") + (days ? "d" : "-");
  f.add("core", core);
  f.add("prev|core", prev + "|" + core);
  f.add("nfilled", std::to_string(std::min(filled, 6)));
  std::vector<DialogueTurn> window;
  try {
    window = parse_context(in.context_text);
  } catch (const ValidationError&) {
  }
  for (const auto& t : window) {
    const char* tag = t.speaker == Speaker::kCoach ? "c" : "p";
    const auto w = lowered_words(t.text);
    for (std::size_t i = 0; i < w.size(); ++i) {
      f.add(tag, w[i]);
      f.add(std::string(tag) + "|prev", w[i] + "|" + prev);
      if (i + 1 < w.size()) {
        f.add(std::string(tag) + "2", w[i] + " " + w[i + 1]);
        f.add(std::string(tag) + "2|prev|core", w[i] + " " + w[i + 1] + "|" + prev + "|" + core);
      }
    }
  }
  return f.take();
}

std::vector<float> one_hot(std::size_t k, std::size_t n) {
  std::vector<float> v(n, 0.0F);
  v[k] = 1.0F;
  return v;
}

std::string condition_key(MechanismSet m) { return "m" + std::to_string(m.bits()); }

}  // namespace

std::vector<Feature> text_features(std::string_view text, int dim_bits) {
  FeatureBuilder f(dim_bits);
  f.add("bias");
  const auto w = lowered_words(text);
  for (std::size_t i = 0; i < w.size(); ++i) {
    f.add("u", w[i]);
    if (i + 1 < w.size()) f.add("b", w[i] + " " + w[i + 1]);
  }
  if (text.find('?') != std::string_view::npos) f.add("has_question");
  return f.take();
}

// ---------------------------------------------------------------------------
// LinearSlotTagger

LinearSlotTagger::LinearSlotTagger(BackendSpec spec, HashedLinearModel model)
    : spec_(std::move(spec)), model_(std::move(model)) {}

std::shared_ptr<LinearSlotTagger> LinearSlotTagger::train(const std::vector<BIOSequence>& data,
                                                          const TrainRecipe& recipe, FitStats* stats) {
  recipe.validate();
  check_size(data.size(), recipe, "slot tagger");
  const int k = static_cast<int>(bio_labels().size());
  std::vector<HashedLinearModel::Example> examples;
  for (const auto& seq : data) {
    seq.validate();
    auto feats = sentence_features(seq.tokens, recipe.dim_bits);
    const std::size_t n = std::min(seq.tokens.size(), static_cast<std::size_t>(recipe.max_length));
    for (std::size_t i = 0; i < n; ++i) {
      examples.push_back({std::move(feats[i]), one_hot(static_cast<std::size_t>(*bio_label_id(seq.labels[i])),
                                                       static_cast<std::size_t>(k))});
    }
  }
  HashedLinearModel model(recipe.dim_bits, k, HashedLinearModel::Loss::kSoftmax);
  auto s = model.fit(examples, recipe.fit_options());
  if (stats != nullptr) *stats = std::move(s);
  return std::make_shared<LinearSlotTagger>(trained_spec(BackendKind::kSlotTagger, recipe), std::move(model));
}

std::vector<std::string> LinearSlotTagger::tag(const std::vector<std::string>& tokens) const {
  const auto& labels = bio_labels();
  const std::size_t k = labels.size();
  const std::size_t n = tokens.size();
  if (n == 0) return {};
  std::vector<BioTag> tags;
  tags.reserve(k);
  for (const auto& l : labels) tags.push_back(parse_bio_label(l));

  const auto feats = sentence_features(tokens, model_.dim_bits());
  constexpr double kNeg = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> score(n, std::vector<double>(k, kNeg));
  std::vector<std::vector<int>> back(n, std::vector<int>(k, -1));
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = model_.predict(feats[i]);
    for (std::size_t c = 0; c < k; ++c) {
      const double lp = std::log(std::max(static_cast<double>(p[c]), 1e-12));
      if (i == 0) {
        if (transition_ok(tags[0], false, tags[c])) score[0][c] = lp;
        continue;
      }
      for (std::size_t pc = 0; pc < k; ++pc) {
        if (score[i - 1][pc] == kNeg || !transition_ok(tags[pc], true, tags[c])) continue;
        const double s = score[i - 1][pc] + lp;
        if (s > score[i][c]) {
          score[i][c] = s;
          back[i][c] = static_cast<int>(pc);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < k; ++c) {
    if (score[n - 1][c] > score[n - 1][best]) best = c;
  }
  std::vector<std::string> out(n);
  for (std::size_t i = n; i-- > 0;) {
    out[i] = labels[best];
    if (i > 0) best = static_cast<std::size_t>(back[i][best]);
  }
  return out;
}

void LinearSlotTagger::save_payload(const fs::path& dir) const { save_model(model_, dir / "model.bin"); }

std::shared_ptr<LinearSlotTagger> LinearSlotTagger::load(const fs::path& dir, BackendSpec spec) {
  return std::make_shared<LinearSlotTagger>(std::move(spec), load_model(dir / "model.bin"));
}

// ---------------------------------------------------------------------------
// LinearCarryover

LinearCarryover::LinearCarryover(BackendSpec spec, HashedLinearModel model)
    : spec_(std::move(spec)), model_(std::move(model)) {}

std::shared_ptr<LinearCarryover> LinearCarryover::train(const std::vector<CarryoverExample>& data,
                                                        const TrainRecipe& recipe, FitStats* stats) {
  recipe.validate();
  check_size(data.size(), recipe, "carryover");
  std::vector<HashedLinearModel::Example> examples;
  examples.reserve(data.size());
  for (const auto& ex : data) {
    examples.push_back({carryover_features(ex.query, recipe.dim_bits), one_hot(ex.keep_previous ? 1 : 0, 2)});
  }
  HashedLinearModel model(recipe.dim_bits, 2, HashedLinearModel::Loss::kSoftmax);
  auto s = model.fit(examples, recipe.fit_options());
  if (stats != nullptr) *stats = std::move(s);
  return std::make_shared<LinearCarryover>(trained_spec(BackendKind::kCarryover, recipe), std::move(model));
}

CarryoverDecision LinearCarryover::decide(const CarryoverQuery& q) const {
  const auto p = model_.predict(carryover_features(q, model_.dim_bits()));
  const bool keep = p[1] > p[0];
  return {q.slot, keep, static_cast<double>(keep ? p[1] : p[0])};
}

void LinearCarryover::save_payload(const fs::path& dir) const { save_model(model_, dir / "model.bin"); }

std::shared_ptr<LinearCarryover> LinearCarryover::load(const fs::path& dir, BackendSpec spec) {
  return std::make_shared<LinearCarryover>(std::move(spec), load_model(dir / "model.bin"));
}

// ---------------------------------------------------------------------------
// LinearSeqMultitask

LinearSeqMultitask::LinearSeqMultitask(BackendSpec spec, HashedLinearModel stage_model, ConditionalNGram generator)
    : spec_(std::move(spec)), stage_model_(std::move(stage_model)), generator_(std::move(generator)) {}

std::string LinearSeqMultitask::response_condition(Stage stage, const BeliefState& b) {
  std::string key(stage_token(stage));
  if (stage == Stage::kGoalImplementation) return key;
  const bool quantity = b.filled(Slot::kAmount) || b.filled(Slot::kDuration) || b.filled(Slot::kDistance);
  const char* need = !b.filled(Slot::kActivity)                                     ? "activity"
                     : !(b.filled(Slot::kDayname) || b.filled(Slot::kDaynumber))   ? "dayname"
                     : !quantity                                                     ? "quantity"
                     : !b.filled(Slot::kTime)                                        ? "time"
                     : !b.filled(Slot::kScore)                                       ? "score"
                                                                                     : "confirm";
  return key + "/" + need;
}

std::shared_ptr<LinearSeqMultitask> LinearSeqMultitask::train(const std::vector<SeqExample>& data,
                                                              const TrainRecipe& recipe, FitStats* stats) {
  recipe.validate();
  check_size(data.size(), recipe, "seq multitask");
  std::vector<HashedLinearModel::Example> stage_examples;
  ConditionalNGram generator;
  std::size_t responses = 0;
  for (const auto& ex : data) {
    const AssembledInput in = split_assembled(ex.input);
    if (in.task_prefix == kStagePrefix) {
      const auto target = parse_stage_token(trim(ex.target));
      if (!target) throw SchemaError("stage example with target '" + ex.target + "'");
      stage_examples.push_back({stage_features(in, recipe.dim_bits), one_hot(static_cast<std::size_t>(*target), 2)});
    } else if (in.task_prefix == kResponsePrefix) {
      const auto stage = parse_stage_token(in.stage_token);
      if (!stage) throw SchemaError("response example without a stage token");
      auto tokens = lm_tokenize(ex.target);
      if (tokens.size() > static_cast<std::size_t>(recipe.max_length)) tokens.resize(static_cast<std::size_t>(recipe.max_length));
      if (tokens.empty()) continue;
      generator.add(response_condition(*stage, parse_belief(in.belief_text)), tokens);
      ++responses;
    } else {
      throw SchemaError("unknown task prefix in training input");
    }
  }
  if (stage_examples.empty()) throw DataTooSmall("seq multitask: no stage examples");
  if (responses == 0) throw DataTooSmall("seq multitask: no response examples");
  HashedLinearModel model(recipe.dim_bits, 2, HashedLinearModel::Loss::kSoftmax);
  auto s = model.fit(stage_examples, recipe.fit_options());
  if (stats != nullptr) *stats = std::move(s);
  auto spec = trained_spec(BackendKind::kSeqMultitask, recipe);
  spec.config["decode"] = {{"top_k", recipe.top_k.value_or(0)}, {"top_p", recipe.top_p.value_or(1.0)}};
  return std::make_shared<LinearSeqMultitask>(std::move(spec), std::move(model), std::move(generator));
}

std::string LinearSeqMultitask::generate(const std::string& input, const DecodeOptions& opts) const {
  const AssembledInput in = split_assembled(input);
  if (in.task_prefix == kStagePrefix) {
    const auto p = stage_model_.predict(stage_features(in, stage_model_.dim_bits()));
    return std::string(stage_token(p[1] > p[0] ? Stage::kGoalImplementation : Stage::kGoalSetting));
  }
  if (in.task_prefix != kResponsePrefix) throw BackendFailure("unknown task prefix");
  const auto stage = parse_stage_token(in.stage_token);
  if (!stage) throw BackendFailure("unknown stage token");
  const auto tokens = generator_.generate(response_condition(*stage, parse_belief(in.belief_text)), opts);
  return lm_detokenize(tokens);
}

void LinearSeqMultitask::save_payload(const fs::path& dir) const {
  save_model(stage_model_, dir / "stage.bin");
  save_json(generator_.to_json(), dir / "generator.json");
}

std::shared_ptr<LinearSeqMultitask> LinearSeqMultitask::load(const fs::path& dir, BackendSpec spec) {
  return std::make_shared<LinearSeqMultitask>(std::move(spec), load_model(dir / "stage.bin"),
                                              ConditionalNGram::from_json(load_json(dir / "generator.json")));
}

// ---------------------------------------------------------------------------
// LinearEmotionClassifier

LinearEmotionClassifier::LinearEmotionClassifier(BackendSpec spec, HashedLinearModel model,
                                                 std::shared_ptr<const EmotionVocabulary> vocab)
    : spec_(std::move(spec)), model_(std::move(model)), vocab_(std::move(vocab)) {
  if (static_cast<std::size_t>(model_.outputs()) != vocab_->size()) {
    throw ConfigError("emotion model width does not match the vocabulary");
  }
}

std::shared_ptr<LinearEmotionClassifier> LinearEmotionClassifier::train(
    const std::vector<LabeledText>& data, const TrainRecipe& recipe,
    std::shared_ptr<const EmotionVocabulary> vocab, FitStats* stats) {
  recipe.validate();
  check_size(data.size(), recipe, "emotion classifier");
  std::vector<HashedLinearModel::Example> examples;
  examples.reserve(data.size());
  for (const auto& ex : data) {
    auto idx = vocab->index_of(ex.label);
    if (!idx) throw SchemaError("unknown emotion label '" + ex.label + "'");
    examples.push_back({text_features(ex.text, recipe.dim_bits), one_hot(*idx, vocab->size())});
  }
  HashedLinearModel model(recipe.dim_bits, static_cast<int>(vocab->size()), HashedLinearModel::Loss::kSoftmax);
  auto s = model.fit(examples, recipe.fit_options());
  if (stats != nullptr) *stats = std::move(s);
  auto spec = trained_spec(BackendKind::kEmotionClassifier, recipe);
  spec.config["labels"] = vocab->labels();
  return std::make_shared<LinearEmotionClassifier>(std::move(spec), std::move(model), std::move(vocab));
}

std::vector<double> LinearEmotionClassifier::predict(const std::string& utterance) const {
  const auto p = model_.predict(text_features(utterance, model_.dim_bits()));
  std::vector<double> out(p.begin(), p.end());
  double total = 0.0;
  for (double x : out) total += x;
  for (double& x : out) x /= total;  // float softmax -> exact double normalization
  return out;
}

void LinearEmotionClassifier::save_payload(const fs::path& dir) const { save_model(model_, dir / "model.bin"); }

std::shared_ptr<LinearEmotionClassifier> LinearEmotionClassifier::load(const fs::path& dir, BackendSpec spec) {
  auto vocab = spec.config.contains("labels")
                   ? EmotionVocabulary::from_labels(spec.config.at("labels").get<std::vector<std::string>>())
                   : EmotionVocabulary::builtin();
  return std::make_shared<LinearEmotionClassifier>(std::move(spec), load_model(dir / "model.bin"), std::move(vocab));
}

// ---------------------------------------------------------------------------
// LinearMechanismLabeler

LinearMechanismLabeler::LinearMechanismLabeler(BackendSpec spec, HashedLinearModel model)
    : spec_(std::move(spec)), model_(std::move(model)) {}

std::shared_ptr<LinearMechanismLabeler> LinearMechanismLabeler::train(const std::vector<MechanismExample>& data,
                                                                      const TrainRecipe& recipe, FitStats* stats) {
  recipe.validate();
  check_size(data.size(), recipe, "mechanism labeler");
  std::vector<HashedLinearModel::Example> examples;
  examples.reserve(data.size());
  for (const auto& ex : data) {
    std::vector<float> y(3, 0.0F);
    for (std::size_t k = 0; k < 3; ++k) y[k] = ex.mechanisms.contains(kAllMechanisms[k]) ? 1.0F : 0.0F;
    examples.push_back({text_features(ex.text, recipe.dim_bits), std::move(y)});
  }
  HashedLinearModel model(recipe.dim_bits, 3, HashedLinearModel::Loss::kSigmoid);
  auto s = model.fit(examples, recipe.fit_options());
  if (stats != nullptr) *stats = std::move(s);
  return std::make_shared<LinearMechanismLabeler>(trained_spec(BackendKind::kMechanismLabeler, recipe), std::move(model));
}

MechanismSet LinearMechanismLabeler::label(const std::string& response) const {
  const auto p = model_.predict(text_features(response, model_.dim_bits()));
  MechanismSet out;
  for (std::size_t k = 0; k < 3; ++k) {
    if (p[k] > 0.5F) out.insert(kAllMechanisms[k]);
  }
  return out;
}

void LinearMechanismLabeler::save_payload(const fs::path& dir) const { save_model(model_, dir / "model.bin"); }

std::shared_ptr<LinearMechanismLabeler> LinearMechanismLabeler::load(const fs::path& dir, BackendSpec spec) {
  return std::make_shared<LinearMechanismLabeler>(std::move(spec), load_model(dir / "model.bin"));
}

// ---------------------------------------------------------------------------
// NGramEmpathyGenerator

NGramEmpathyGenerator::NGramEmpathyGenerator(BackendSpec spec, ConditionalNGram lm)
    : spec_(std::move(spec)), lm_(std::move(lm)) {}

std::shared_ptr<NGramEmpathyGenerator> NGramEmpathyGenerator::train(const std::vector<EmpathySample>& data,
                                                                    const std::vector<EmpathySample>& few_shot,
                                                                    const TrainRecipe& recipe) {
  recipe.validate();
  check_size(data.size(), recipe, "empathy generator");
  ConditionalNGram lm;
  auto add_all = [&](const std::vector<EmpathySample>& set, std::size_t limit) {
    for (std::size_t i = 0; i < set.size() && i < limit; ++i) {
      const auto& s = set[i];
      if (s.mechanisms.empty()) continue;
      auto tokens = lm_tokenize(s.response);
      if (tokens.size() > static_cast<std::size_t>(recipe.max_length)) tokens.resize(static_cast<std::size_t>(recipe.max_length));
      if (!tokens.empty()) lm.add(condition_key(s.mechanisms), tokens);
    }
  };
  add_all(data, data.size());
  const std::size_t shots = recipe.few_shot_samples > 0 ? static_cast<std::size_t>(recipe.few_shot_samples) : few_shot.size();
  for (int e = 0; e < recipe.few_shot_epochs; ++e) add_all(few_shot, shots);
  auto spec = trained_spec(BackendKind::kCausalLm, recipe);
  spec.config["few_shot"] = std::min(shots, few_shot.size());
  return std::make_shared<NGramEmpathyGenerator>(std::move(spec), std::move(lm));
}

std::string NGramEmpathyGenerator::complete(const std::string& prompt, const DecodeOptions& opts) const {
  const std::string bos = std::string(kBos) + " ";
  if (prompt.rfind(bos, 0) != 0) throw BackendFailure("malformed empathy prompt");
  MechanismSet ms;
  std::size_t pos = bos.size();
  for (Mechanism m : kAllMechanisms) {
    const std::string tok = std::string(mechanism_token(m)) + " ";
    if (prompt.compare(pos, tok.size(), tok) == 0) {
      ms.insert(m);
      pos += tok.size();
    }
  }
  if (ms.empty()) throw BackendFailure("empathy prompt carries no mechanism");
  const auto tokens = lm_.generate(condition_key(ms), opts);
  return lm_detokenize(tokens) + " " + std::string(kEos);
}

void NGramEmpathyGenerator::save_payload(const fs::path& dir) const { save_json(lm_.to_json(), dir / "lm.json"); }

std::shared_ptr<NGramEmpathyGenerator> NGramEmpathyGenerator::load(const fs::path& dir, BackendSpec spec) {
  return std::make_shared<NGramEmpathyGenerator>(std::move(spec), ConditionalNGram::from_json(load_json(dir / "lm.json")));
}

// ---------------------------------------------------------------------------
// LinearRegressor

LinearRegressor::LinearRegressor(BackendSpec spec, HashedLinearModel model)
    : spec_(std::move(spec)), model_(std::move(model)) {}

std::shared_ptr<LinearRegressor> LinearRegressor::train(const std::vector<ScoredText>& data,
                                                        const TrainRecipe& recipe, FitStats* stats) {
  recipe.validate();
  check_size(data.size(), recipe, "empathy regressor");
  std::vector<HashedLinearModel::Example> examples;
  examples.reserve(data.size());
  for (const auto& ex : data) {
    examples.push_back({text_features(ex.text, recipe.dim_bits), {static_cast<float>(ex.score)}});
  }
  HashedLinearModel model(recipe.dim_bits, 1, HashedLinearModel::Loss::kSquared);
  auto s = model.fit(examples, recipe.fit_options());
  if (stats != nullptr) *stats = std::move(s);
  return std::make_shared<LinearRegressor>(trained_spec(BackendKind::kEmpathyRegressor, recipe), std::move(model));
}

double LinearRegressor::score(const std::string& text) const {
  return static_cast<double>(model_.predict(text_features(text, model_.dim_bits()))[0]);
}

void LinearRegressor::save_payload(const fs::path& dir) const { save_model(model_, dir / "model.bin"); }

std::shared_ptr<LinearRegressor> LinearRegressor::load(const fs::path& dir, BackendSpec spec) {
  return std::make_shared<LinearRegressor>(std::move(spec), load_model(dir / "model.bin"));
}

// ---------------------------------------------------------------------------
// NGramScorer

NGramScorer::NGramScorer(BackendSpec spec, NGramLM lm) : spec_(std::move(spec)), lm_(std::move(lm)) {}

std::shared_ptr<NGramScorer> NGramScorer::train(const std::vector<std::string>& sentences, const TrainRecipe& recipe) {
  recipe.validate();
  check_size(sentences.size(), recipe, "lm scorer");
  NGramLM lm;
  for (const auto& s : sentences) {
    auto tokens = lm_tokenize(to_lower(s));
    if (!tokens.empty()) lm.add_sentence(tokens);
  }
  return std::make_shared<NGramScorer>(trained_spec(BackendKind::kLmScorer, recipe), std::move(lm));
}

LogLikelihood NGramScorer::log_likelihood(const std::string& text) const {
  return lm_.score_sentence(lm_tokenize(to_lower(text)));
}

void NGramScorer::save_payload(const fs::path& dir) const { save_json(lm_.to_json(), dir / "lm.json"); }

std::shared_ptr<NGramScorer> NGramScorer::load(const fs::path& dir, BackendSpec spec) {
  return std::make_shared<NGramScorer>(std::move(spec), NGramLM::from_json(load_json(dir / "lm.json")));
}

// ---------------------------------------------------------------------------
// TableParaphraser

TableParaphraser::TableParaphraser(BackendSpec spec, std::vector<Rule> rules)
    : spec_(std::move(spec)), rules_(std::move(rules)) {}

std::shared_ptr<TableParaphraser> TableParaphraser::train(const std::vector<ParaphrasePair>& data,
                                                          const TrainRecipe& recipe) {
  recipe.validate();
  check_size(data.size(), recipe, "paraphraser");
  std::vector<Rule> rules;
  for (const auto& pair : data) {
    const auto a = lm_tokenize(pair.source);
    const auto b = lm_tokenize(pair.target);
    std::size_t pre = 0;
    while (pre < a.size() && pre < b.size() && to_lower(a[pre]) == to_lower(b[pre])) ++pre;
    std::size_t suf = 0;
    while (suf < a.size() - pre && suf < b.size() - pre &&
           to_lower(a[a.size() - 1 - suf]) == to_lower(b[b.size() - 1 - suf])) {
      ++suf;
    }
    Rule r{{a.begin() + static_cast<long>(pre), a.end() - static_cast<long>(suf)},
           {b.begin() + static_cast<long>(pre), b.end() - static_cast<long>(suf)}};
    if (r.first.empty() || r.first.size() > 4 || r.second.size() > 6) continue;
    if (std::find(rules.begin(), rules.end(), r) == rules.end()) rules.push_back(std::move(r));
  }
  return std::make_shared<TableParaphraser>(trained_spec(BackendKind::kParaphraser, recipe), std::move(rules));
}

std::string TableParaphraser::paraphrase(const std::string& text, std::uint64_t seed) const {
  const auto tokens = lm_tokenize(text);
  std::vector<std::pair<std::size_t, std::size_t>> hits;  // (rule, position)
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    const auto& src = rules_[r].first;
    for (std::size_t i = 0; i + src.size() <= tokens.size(); ++i) {
      bool ok = true;
      for (std::size_t k = 0; k < src.size() && ok; ++k) ok = to_lower(tokens[i + k]) == to_lower(src[k]);
      if (ok) {
        hits.emplace_back(r, i);
        break;
      }
    }
  }
  if (hits.empty()) throw ParaphraserFailure("no paraphrase rule applies");
  std::mt19937_64 rng(seed);
  const auto [r, at] = hits[std::uniform_int_distribution<std::size_t>(0, hits.size() - 1)(rng)];
  std::vector<std::string> out(tokens.begin(), tokens.begin() + static_cast<long>(at));
  out.insert(out.end(), rules_[r].second.begin(), rules_[r].second.end());
  out.insert(out.end(), tokens.begin() + static_cast<long>(at + rules_[r].first.size()), tokens.end());
  return lm_detokenize(out);
}

void TableParaphraser::save_payload(const fs::path& dir) const {
  Json j = Json::array();
  for (const auto& [src, tgt] : rules_) j.push_back({{"source", src}, {"target", tgt}});
  save_json(j, dir / "rules.json");
}

std::shared_ptr<TableParaphraser> TableParaphraser::load(const fs::path& dir, BackendSpec spec) {
  std::vector<Rule> rules;
  for (const auto& r : load_json(dir / "rules.json")) {
    rules.emplace_back(r.at("source").get<std::vector<std::string>>(), r.at("target").get<std::vector<std::string>>());
  }
  return std::make_shared<TableParaphraser>(std::move(spec), std::move(rules));
}

}  // namespace goalcoach
