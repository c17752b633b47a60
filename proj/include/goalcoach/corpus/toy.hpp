// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Synthetic goal-coaching weeks over a five-slot grammar (activity, amount,
// duration, dayname, time). Every week is scripted: the patient names an
// activity and quantity, then days and a time, may revise one value, the
// coach confirms, the patient agrees (goal implementation), reports
// progress, and may ask to change the goal. All turns carry stages, spans
// and annotated beliefs; forward and backward goals are emitted per week.

#include <cstdint>
#include <vector>

#include "goalcoach/corpus/corpus.hpp"
#include "goalcoach/nlg/emp.hpp"

namespace goalcoach {

struct ToyConfig {
  int weeks = 120;
  std::uint64_t seed = 7;
  double test_fraction = 0.2;  // weeks assigned to dataset 2
  double setting_revision_rate = 0.5;
  double implementation_revision_rate = 0.3;
  int progress_reports = 2;
};

Corpus generate_toy_corpus(const ToyConfig& config = {});

/// Patient turns of one toy week, in order.
std::vector<std::string> patient_script(const Week& week);

/// Small mechanism-tagged empathy set with template responses.
std::vector<EmpathySample> toy_empathy_samples(int n, std::uint64_t seed);

}  // namespace goalcoach
