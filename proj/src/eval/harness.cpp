// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/eval/harness.hpp"

#include <sstream>

#include <spdlog/spdlog.h>

#include "goalcoach/core/errors.hpp"
#include "goalcoach/nlg/hc.hpp"
#include "goalcoach/nlu/nlu.hpp"

namespace goalcoach {

PRF evaluate_tagger(const Corpus& corpus, const SlotTaggerBackend& tagger, std::map<Slot, PRF>* by_slot,
                    bool slot_bearing_only) {
  std::vector<std::vector<SlotSpan>> pred, gold;
  for (const auto& w : corpus.weeks) {
    for (const auto& u : w.turns) {
      if (slot_bearing_only && !u.has_spans()) continue;
      gold.push_back(u.spans());
      try {
        pred.push_back(extract_slots(u.text, tagger));
      } catch (const Error& e) {
        spdlog::debug("tagger failed on '{}': {}", u.text, e.what());
        pred.emplace_back();
      }
    }
  }
  if (by_slot) {
    for (Slot s : kAllSlots) {
      const PRF p = slot_prf(pred, gold, s);
      if (p.gold > 0 || p.predicted > 0) (*by_slot)[s] = p;
    }
  }
  return slot_prf(pred, gold);
}

BinaryScores evaluate_carryover(const std::vector<CarryoverExample>& examples, const CarryoverBackend& carry) {
  if (examples.empty()) throw EmptyInput("no carryover examples to evaluate");
  std::size_t tp_keep = 0, pred_keep = 0, gold_keep = 0, tp_rep = 0, pred_rep = 0, gold_rep = 0;
  for (const auto& ex : examples) {
    bool keep = false;
    try {
      keep = carry.decide(ex.query).keep_previous;
    } catch (const std::exception&) {
      keep = false;  // the pipeline's fallback
    }
    (keep ? pred_keep : pred_rep) += 1;
    (ex.keep_previous ? gold_keep : gold_rep) += 1;
    if (keep && ex.keep_previous) ++tp_keep;
    if (!keep && !ex.keep_previous) ++tp_rep;
  }
  BinaryScores b;
  b.count = examples.size();
  b.accuracy = static_cast<double>(tp_keep + tp_rep) / static_cast<double>(examples.size());
  b.f1_keep = prf_from_counts(tp_keep, pred_keep, gold_keep).f1;
  b.f1_replace = prf_from_counts(tp_rep, pred_rep, gold_rep).f1;
  b.macro_f1 = (b.f1_keep + b.f1_replace) / 2.0;
  return b;
}

double evaluate_stage(const Corpus& corpus, const SeqBackend& seq) {
  std::size_t total = 0, correct = 0;
  for (const auto& ex : seq_examples(corpus)) {
    if (!starts_with_ci(ex.input, kStagePrefix)) continue;
    const AssembledInput in = split_assembled(ex.input);
    std::string out;
    try {
      out = trim(seq.generate(ex.input, DecodeOptions{}));
    } catch (const std::exception&) {
      out.clear();
    }
    if (!parse_stage_token(out)) out = in.stage_token;
    ++total;
    correct += out == ex.target ? 1 : 0;
  }
  if (total == 0) throw EmptyInput("corpus has no stage examples");
  return static_cast<double>(correct) / static_cast<double>(total);
}

std::vector<GoalPrediction> track_goals(const Corpus& corpus, const SlotTaggerBackend& tagger,
                                        const CarryoverBackend& carry, BeliefUpdater updater) {
  std::vector<GoalPrediction> out;
  for (const auto& w : corpus.weeks) {
    const auto gold_states = gold_beliefs(w);
    std::vector<DialogueTurn> seen;
    BeliefState belief;
    Stage prev_stage = Stage::kGoalSetting;
    std::optional<BeliefState> forward_pred, forward_gold;
    for (std::size_t i = 0; i < w.turns.size(); ++i) {
      const auto& u = w.turns[i];
      const DialogueTurn turn{u.speaker, u.text, u.turn_index, u.stage};
      if (u.speaker == Speaker::kPatient) {
        std::vector<SlotSpan> spans;
        try {
          spans = extract_slots(u.text, tagger);
        } catch (const BackendFailure&) {
        }
        if (updater == BeliefUpdater::kLastMention) {
          belief = rule_update(belief, spans);
        } else {
          belief = update_belief(belief, spans, carry, SessionContext{context_window(seen, turn), prev_stage, belief});
        }
        if (prev_stage == Stage::kGoalSetting && u.stage == Stage::kGoalImplementation) {
          forward_pred = belief;
          forward_gold = gold_states[i];
        }
      }
      if (u.stage) prev_stage = *u.stage;
      seen.push_back(turn);
    }
    if (forward_pred) {
      const auto g = corpus.goal(w.week_id, SnapshotPoint::kForward);
      out.push_back(GoalPrediction{*forward_pred, g ? g->belief : *forward_gold, w.week_id, SnapshotPoint::kForward});
    }
    const auto g = corpus.goal(w.week_id, SnapshotPoint::kBackward);
    const BeliefState gold_end = g ? g->belief : (gold_states.empty() ? BeliefState{} : gold_states.back());
    out.push_back(GoalPrediction{belief, gold_end, w.week_id, SnapshotPoint::kBackward});
  }
  return out;
}

std::vector<TranscriptSession> simulate_corpus(const Corpus& corpus, const BackendSet& backends,
                                               const SessionConfig& base) {
  std::ostringstream buf;
  for (const auto& w : corpus.weeks) {
    SessionConfig cfg = base;
    cfg.week_id = w.week_id;
    Session s(backends, cfg);
    for (const auto& u : w.turns) {
      if (u.speaker == Speaker::kPatient) {
        s.step(u.text);
      } else {
        s.coach_message(u.text);
      }
    }
    s.close();
    s.export_transcript(buf);
  }
  std::istringstream in(buf.str());
  return read_transcript(in);
}

namespace {

std::vector<GoalPrediction> split_points(const std::vector<GoalPrediction>& preds, SnapshotPoint p) {
  std::vector<GoalPrediction> out;
  for (const auto& g : preds) {
    if (g.point == p) out.push_back(g);
  }
  return out;
}

}  // namespace

EvalReport evaluate_transcripts(const std::vector<TranscriptSession>& transcripts, const Corpus& gold,
                                const GenerationScorers& scorers) {
  EvalReport r;
  r.system = "transcripts";
  std::vector<GoalPrediction> preds;
  std::vector<std::string> candidates, references;
  std::size_t unmatched = 0;
  for (const auto& t : transcripts) {
    const Week* w = gold.find_week(t.config.week_id);
    if (w == nullptr) {
      ++unmatched;
      continue;
    }
    if (r.backends.empty() && !t.events.empty()) r.backends = t.events.front().value("backends", Json::object());
    // Gold coach reply for the n-th patient turn.
    std::vector<std::optional<std::string>> gold_replies;
    for (std::size_t i = 0; i < w->turns.size(); ++i) {
      if (w->turns[i].speaker != Speaker::kPatient) continue;
      if (i + 1 < w->turns.size() && w->turns[i + 1].speaker == Speaker::kCoach) {
        gold_replies.emplace_back(w->turns[i + 1].text);
      } else {
        gold_replies.emplace_back(std::nullopt);
      }
    }
    std::size_t n = 0;
    for (const auto& e : t.events) {
      const std::string ev = e.value("event", "");
      if (ev == "patient_message") {
        if (n < gold_replies.size() && gold_replies[n] && e.contains("result")) {
          candidates.push_back(e.at("result").value("coach_response", ""));
          references.push_back(*gold_replies[n]);
        }
        ++n;
      } else if (ev == "close") {
        const auto gb = gold.goal(w->week_id, SnapshotPoint::kBackward);
        const auto gf = gold.goal(w->week_id, SnapshotPoint::kForward);
        try {
          if (gb) preds.push_back({snapshot_from_json(e.at("backward")).belief, gb->belief, w->week_id, SnapshotPoint::kBackward});
          if (gf) {
            const BeliefState predicted = e.contains("forward") ? snapshot_from_json(e.at("forward")).belief : BeliefState{};
            preds.push_back({predicted, gf->belief, w->week_id, SnapshotPoint::kForward});
          }
        } catch (const MalformedBelief& err) {
          throw SchemaError(std::string("transcript snapshot: ") + err.what());
        }
      }
    }
  }
  for (SnapshotPoint p : {SnapshotPoint::kForward, SnapshotPoint::kBackward}) {
    const auto part = split_points(preds, p);
    if (!part.empty()) r.goals[p] = score_goals(part);
  }
  if (!candidates.empty()) {
    r.bleu = bleu_avg(candidates, references);
    if (scorers.lm) r.perplexity = perplexity(candidates, *scorers.lm);
    if (scorers.empathy) r.empathy_delta = empathy_delta(candidates, references, *scorers.empathy);
  }
  r.counts = {{"sessions", transcripts.size()},
              {"unmatched_sessions", unmatched},
              {"responses", candidates.size()},
              {"goals", preds.size()}};
  if (scorers.lm) r.counts["lm"] = scorers.lm->spec().identity;
  if (scorers.empathy) r.counts["empathy_scorer"] = scorers.empathy->spec().identity;
  return r;
}

EvalReport evaluate_components(const Corpus& corpus, const BackendSet& backends) {
  backends.validate();
  EvalReport r;
  r.system = "components";
  r.backends = backends.describe();
  r.slots = evaluate_tagger(corpus, *backends.tagger, &r.slots_by_name);
  const auto collisions = mine_collisions(corpus);
  if (!collisions.empty()) r.carryover = evaluate_carryover(collisions, *backends.carryover);
  try {
    r.stage_accuracy = evaluate_stage(corpus, *backends.seq);
  } catch (const SchemaError& e) {
    spdlog::warn("stage accuracy skipped: {}", e.what());
  } catch (const EmptyInput&) {
  }
  const auto preds = track_goals(corpus, *backends.tagger, *backends.carryover);
  for (SnapshotPoint p : {SnapshotPoint::kForward, SnapshotPoint::kBackward}) {
    const auto part = split_points(preds, p);
    if (!part.empty()) r.goals[p] = score_goals(part);
  }
  r.counts = {{"weeks", corpus.weeks.size()},
              {"utterances", corpus.utterance_count()},
              {"collisions", collisions.size()},
              {"goals", preds.size()}};
  return r;
}

}  // namespace goalcoach
