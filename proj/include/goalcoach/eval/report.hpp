// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "goalcoach/eval/metrics.hpp"

namespace goalcoach {

inline constexpr int kReportSchemaVersion = 1;

struct BinaryScores {
  double accuracy = 0.0;
  double f1_keep = 0.0;
  double f1_replace = 0.0;
  double macro_f1 = 0.0;  // mean of the two class F1 scores
  std::size_t count = 0;
};

struct GoalScores {
  MatchRates rates;
  std::map<Slot, MatchRates> by_slot;
  std::array<double, kSlotCount + 1> correctness{};  // index k: correctness@k in percent
  std::size_t goals = 0;
};

GoalScores score_goals(const std::vector<GoalPrediction>& preds);

struct EvalReport {
  int schema_version = kReportSchemaVersion;
  std::string system;
  Json backends = Json::object();
  std::optional<PRF> slots;
  std::map<Slot, PRF> slots_by_name;
  std::optional<BinaryScores> carryover;
  std::optional<double> stage_accuracy;
  std::map<SnapshotPoint, GoalScores> goals;
  std::optional<double> bleu;
  std::optional<double> perplexity;
  std::optional<double> empathy_delta;
  Json counts = Json::object();
  std::string averaging = "per_week_then_weeks";

  Json to_json() const;
  /// Throws SchemaError on a wrong schema_version or missing fields.
  static EvalReport from_json(const Json& j);
};

}  // namespace goalcoach
