// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/eval/report.hpp"

#include "goalcoach/core/errors.hpp"

namespace goalcoach {

GoalScores score_goals(const std::vector<GoalPrediction>& preds) {
  GoalScores g;
  g.goals = preds.size();
  if (preds.empty()) return g;
  g.rates = match_rates(preds);
  g.by_slot = match_rates_by_slot(preds);
  for (int k = 0; k <= static_cast<int>(kSlotCount); ++k) g.correctness[static_cast<std::size_t>(k)] = correctness_at_k(preds, k);
  return g;
}

namespace {

Json prf_json(const PRF& p) {
  return {{"precision", p.precision}, {"recall", p.recall},   {"f1", p.f1},
          {"tp", p.true_positives},   {"predicted", p.predicted}, {"gold", p.gold}};
}

PRF prf_from(const Json& j) {
  PRF p;
  p.precision = j.at("precision").get<double>();
  p.recall = j.at("recall").get<double>();
  p.f1 = j.at("f1").get<double>();
  p.true_positives = j.value("tp", std::size_t{0});
  p.predicted = j.value("predicted", std::size_t{0});
  p.gold = j.value("gold", std::size_t{0});
  return p;
}

Json rates_json(const MatchRates& r) { return {{"complete", r.complete}, {"partial", r.partial}, {"weeks", r.weeks}}; }

MatchRates rates_from(const Json& j) {
  return MatchRates{j.at("complete").get<double>(), j.at("partial").get<double>(), j.value("weeks", std::size_t{0})};
}

}  // namespace

Json EvalReport::to_json() const {
  Json j = {{"schema_version", schema_version}, {"system", system},   {"backends", backends},
            {"counts", counts},                 {"averaging", averaging}};
  if (slots) {
    j["slots"] = prf_json(*slots);
    Json per = Json::object();
    for (const auto& [s, p] : slots_by_name) per[std::string(slot_name(s))] = prf_json(p);
    j["slots"]["by_slot"] = per;
  }
  if (carryover) {
    j["carryover"] = {{"accuracy", carryover->accuracy}, {"f1_keep", carryover->f1_keep},
                      {"f1_replace", carryover->f1_replace}, {"macro_f1", carryover->macro_f1},
                      {"count", carryover->count}};
  }
  if (stage_accuracy) j["stage_accuracy"] = *stage_accuracy;
  Json goals_json = Json::object();
  for (const auto& [point, g] : goals) {
    Json by = Json::object();
    for (const auto& [s, r] : g.by_slot) by[std::string(slot_name(s))] = rates_json(r);
    Json corr = Json::object();
    for (std::size_t k = 0; k < g.correctness.size(); ++k) corr[std::to_string(k)] = g.correctness[k];
    goals_json[std::string(snapshot_point_name(point))] = {
        {"match", rates_json(g.rates)}, {"by_slot", by}, {"correctness_at_k", corr}, {"goals", g.goals}};
  }
  j["goals"] = goals_json;
  Json gen = Json::object();
  if (bleu) gen["bleu_avg"] = *bleu;
  if (perplexity) gen["perplexity"] = *perplexity;
  if (empathy_delta) gen["empathy_delta"] = *empathy_delta;
  j["generation"] = gen;
  return j;
}

EvalReport EvalReport::from_json(const Json& j) {
  try {
    EvalReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw SchemaError("unsupported report schema_version " + std::to_string(r.schema_version));
    }
    r.system = j.value("system", "");
    r.backends = j.value("backends", Json::object());
    r.counts = j.value("counts", Json::object());
    r.averaging = j.value("averaging", r.averaging);
    if (j.contains("slots")) {
      r.slots = prf_from(j.at("slots"));
      const Json by_slot = j.at("slots").value("by_slot", Json::object());
      for (const auto& [name, p] : by_slot.items()) {
        const auto s = parse_slot(name);
        if (!s) throw SchemaError("unknown slot '" + name + "' in report");
        r.slots_by_name[*s] = prf_from(p);
      }
    }
    if (j.contains("carryover")) {
      const Json& c = j.at("carryover");
      r.carryover = BinaryScores{c.at("accuracy").get<double>(), c.at("f1_keep").get<double>(),
                                 c.at("f1_replace").get<double>(), c.at("macro_f1").get<double>(),
                                 c.value("count", std::size_t{0})};
    }
    if (j.contains("stage_accuracy")) r.stage_accuracy = j.at("stage_accuracy").get<double>();
    const Json goals = j.value("goals", Json::object());
    for (const auto& [name, g] : goals.items()) {
      const auto point = parse_snapshot_point(name);
      if (!point) throw SchemaError("unknown snapshot point '" + name + "' in report");
      GoalScores gs;
      gs.rates = rates_from(g.at("match"));
      const Json by_slot = g.value("by_slot", Json::object());
      for (const auto& [sn, rj] : by_slot.items()) {
        const auto s = parse_slot(sn);
        if (!s) throw SchemaError("unknown slot '" + sn + "' in report");
        gs.by_slot[*s] = rates_from(rj);
      }
      for (std::size_t k = 0; k < gs.correctness.size(); ++k) {
        gs.correctness[k] = g.at("correctness_at_k").at(std::to_string(k)).get<double>();
      }
      gs.goals = g.value("goals", std::size_t{0});
      r.goals[*point] = gs;
    }
    const Json gen = j.value("generation", Json::object());
    if (gen.contains("bleu_avg")) r.bleu = gen.at("bleu_avg").get<double>();
    if (gen.contains("perplexity")) r.perplexity = gen.at("perplexity").get<double>();
    if (gen.contains("empathy_delta")) r.empathy_delta = gen.at("empathy_delta").get<double>();
    return r;
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("report: ") + e.what());
  }
}

}  // namespace goalcoach
