// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"

namespace goalcoach {

PRF prf_from_counts(std::size_t tp, std::size_t predicted, std::size_t gold) {
  PRF r;
  r.true_positives = tp;
  r.predicted = predicted;
  r.gold = gold;
  if (predicted == 0 && gold == 0) {
    r.precision = r.recall = r.f1 = 1.0;
    return r;
  }
  r.precision = predicted > 0 ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
  r.recall = gold > 0 ? static_cast<double>(tp) / static_cast<double>(gold) : 0.0;
  r.f1 = r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

namespace {

std::size_t count_matches(const std::vector<SlotSpan>& pred, const std::vector<SlotSpan>& gold,
                          std::optional<Slot> only, std::size_t* n_pred, std::size_t* n_gold) {
  std::multiset<std::pair<Slot, std::string>> g;
  for (const auto& s : gold) {
    if (only && s.slot != *only) continue;
    g.emplace(s.slot, normalize_value(s.value));
    ++*n_gold;
  }
  std::size_t tp = 0;
  for (const auto& s : pred) {
    if (only && s.slot != *only) continue;
    ++*n_pred;
    const auto it = g.find({s.slot, normalize_value(s.value)});
    if (it != g.end()) {
      g.erase(it);
      ++tp;
    }
  }
  return tp;
}

PRF prf_lists(const std::vector<std::vector<SlotSpan>>& pred, const std::vector<std::vector<SlotSpan>>& gold,
              std::optional<Slot> only) {
  if (pred.size() != gold.size()) throw ValidationError("prediction and gold lists differ in length");
  std::size_t tp = 0, np = 0, ng = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) tp += count_matches(pred[i], gold[i], only, &np, &ng);
  return prf_from_counts(tp, np, ng);
}

std::set<std::string> normalized(const std::vector<std::string>& values) {
  std::set<std::string> out;
  for (const auto& v : values) out.insert(normalize_value(v));
  return out;
}

}  // namespace

PRF slot_prf(const std::vector<std::vector<SlotSpan>>& pred, const std::vector<std::vector<SlotSpan>>& gold) {
  return prf_lists(pred, gold, std::nullopt);
}

PRF slot_prf(const std::vector<SlotSpan>& pred, const std::vector<SlotSpan>& gold) {
  return prf_lists({pred}, {gold}, std::nullopt);
}

PRF slot_prf(const std::vector<std::vector<SlotSpan>>& pred, const std::vector<std::vector<SlotSpan>>& gold,
             Slot only) {
  return prf_lists(pred, gold, only);
}

bool slot_complete(const BeliefState& pred, const BeliefState& gold, Slot s) {
  return normalized(pred.values(s)) == normalized(gold.values(s));
}

bool slot_partial(const BeliefState& pred, const BeliefState& gold, Slot s) {
  const auto p = normalized(pred.values(s));
  for (const auto& v : normalized(gold.values(s))) {
    if (p.count(v)) return true;
  }
  return false;
}

MatchRates match_rates(const std::vector<GoalPrediction>& preds) {
  if (preds.empty()) throw EmptyInput("match_rates needs at least one goal prediction");
  MatchRates r;
  for (const auto& p : preds) {
    std::size_t filled = 0, complete = 0, partial = 0;
    for (Slot s : kAllSlots) {
      if (!p.gold.filled(s)) continue;
      ++filled;
      complete += slot_complete(p.predicted, p.gold, s) ? 1 : 0;
      partial += slot_partial(p.predicted, p.gold, s) ? 1 : 0;
    }
    if (filled == 0) continue;
    r.complete += static_cast<double>(complete) / static_cast<double>(filled);
    r.partial += static_cast<double>(partial) / static_cast<double>(filled);
    ++r.weeks;
  }
  if (r.weeks > 0) {
    r.complete /= static_cast<double>(r.weeks);
    r.partial /= static_cast<double>(r.weeks);
  }
  return r;
}

std::map<Slot, MatchRates> match_rates_by_slot(const std::vector<GoalPrediction>& preds) {
  std::map<Slot, MatchRates> out;
  for (const auto& p : preds) {
    for (Slot s : kAllSlots) {
      if (!p.gold.filled(s)) continue;
      auto& r = out[s];
      r.complete += slot_complete(p.predicted, p.gold, s) ? 1.0 : 0.0;
      r.partial += slot_partial(p.predicted, p.gold, s) ? 1.0 : 0.0;
      ++r.weeks;
    }
  }
  for (auto& [s, r] : out) {
    r.complete /= static_cast<double>(r.weeks);
    r.partial /= static_cast<double>(r.weeks);
  }
  return out;
}

int matched_slots(const BeliefState& pred, const BeliefState& gold) {
  int n = 0;
  for (Slot s : kAllSlots) n += slot_complete(pred, gold, s) ? 1 : 0;
  return n;
}

double correctness_at_k(const std::vector<GoalPrediction>& preds, int k) {
  if (k < 0 || k > static_cast<int>(kSlotCount)) throw ValidationError("k must lie in [0, 10]");
  if (preds.empty()) throw EmptyInput("correctness@k needs at least one goal prediction");
  std::size_t ok = 0;
  for (const auto& p : preds) ok += matched_slots(p.predicted, p.gold) >= k ? 1 : 0;
  return 100.0 * static_cast<double>(ok) / static_cast<double>(preds.size());
}

std::vector<std::string> bleu_tokens(std::string_view text) { return tokenize_words(to_lower(text)); }

double corpus_bleu(const std::vector<std::string>& candidates, const std::vector<std::string>& references, int n) {
  if (candidates.size() != references.size()) throw ValidationError("candidate and reference lists differ in length");
  if (n < 1) throw ValidationError("BLEU order must be >= 1");
  std::vector<double> matches(static_cast<std::size_t>(n), 0.0), totals(static_cast<std::size_t>(n), 0.0);
  double cand_len = 0.0, ref_len = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto c = bleu_tokens(candidates[i]);
    const auto r = bleu_tokens(references[i]);
    cand_len += static_cast<double>(c.size());
    ref_len += static_cast<double>(r.size());
    for (int order = 1; order <= n; ++order) {
      std::map<std::vector<std::string>, int> ref_counts;
      for (std::size_t j = 0; j + static_cast<std::size_t>(order) <= r.size(); ++j) {
        ++ref_counts[std::vector<std::string>(r.begin() + static_cast<long>(j), r.begin() + static_cast<long>(j) + order)];
      }
      for (std::size_t j = 0; j + static_cast<std::size_t>(order) <= c.size(); ++j) {
        std::vector<std::string> g(c.begin() + static_cast<long>(j), c.begin() + static_cast<long>(j) + order);
        auto it = ref_counts.find(g);
        if (it != ref_counts.end() && it->second > 0) {
          --it->second;
          matches[static_cast<std::size_t>(order - 1)] += 1.0;
        }
        totals[static_cast<std::size_t>(order - 1)] += 1.0;
      }
    }
  }
  if (cand_len == 0.0) return 0.0;
  double log_sum = 0.0;
  for (int order = 1; order <= n; ++order) {
    double m = matches[static_cast<std::size_t>(order - 1)];
    double t = totals[static_cast<std::size_t>(order - 1)];
    if (order > 1) {
      m += 1.0;
      t += 1.0;
    }
    if (m == 0.0) return 0.0;
    log_sum += std::log(m / t);
  }
  const double bp = cand_len >= ref_len ? 1.0 : std::exp(1.0 - ref_len / cand_len);
  return bp * std::exp(log_sum / n);
}

double bleu_avg(const std::vector<std::string>& candidates, const std::vector<std::string>& references) {
  double sum = 0.0;
  for (int n = 1; n <= 4; ++n) sum += corpus_bleu(candidates, references, n);
  return sum / 4.0;
}

namespace {

double mean_score(const std::vector<std::string>& texts, const RegressorBackend& scorer) {
  double s = 0.0;
  for (const auto& t : texts) {
    try {
      s += scorer.score(t);
    } catch (const BackendFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw BackendFailure(std::string("empathy scorer: ") + e.what());
    }
  }
  return s / static_cast<double>(texts.size());
}

}  // namespace

double empathy_delta(const std::vector<std::string>& candidates, const std::vector<std::string>& references,
                     const RegressorBackend& scorer) {
  if (candidates.empty() || references.empty()) throw EmptyInput("empathy_delta needs candidates and references");
  return mean_score(candidates, scorer) - mean_score(references, scorer);
}

double perplexity(const std::vector<std::string>& candidates, const LMBackend& lm) {
  if (candidates.empty()) throw EmptyInput("perplexity needs at least one candidate");
  double nll = 0.0;
  std::size_t tokens = 0;
  for (const auto& c : candidates) {
    LogLikelihood ll;
    try {
      ll = lm.log_likelihood(c);
    } catch (const BackendFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw BackendFailure(std::string("language model: ") + e.what());
    }
    nll -= ll.log_prob;
    tokens += ll.tokens;
  }
  if (tokens == 0) throw EmptyInput("perplexity: candidates contain no tokens");
  return std::exp(nll / static_cast<double>(tokens));
}

std::size_t export_ab(const std::vector<ABItem>& items, const std::filesystem::path& path, std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  Json key = Json::object();
  const Json questions = Json::array({
      {{"id", "empathy"}, {"text", "Which response is more empathetic?"}},
      {{"id", "coherence"}, {"text", "Which response is more coherent?"}},
  });
  // Item order and A/B sides are both shuffled.
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[mix_seed(seed, i) % i]);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const ABItem& it = items[order[pos]];
    const bool system_first = (mix_seed(seed ^ 0x5bd1e995ULL, order[pos]) & 1U) == 0;
    char id[32];
    std::snprintf(id, sizeof id, "item-%04zu", pos + 1);
    out << Json{{"item_id", id},
                {"input", it.input},
                {"response_a", system_first ? it.system_output : it.baseline_output},
                {"response_b", system_first ? it.baseline_output : it.system_output},
                {"questions", questions}}
               .dump()
        << '\n';
    key[id] = {{"source_index", order[pos]}, {"system", system_first ? "a" : "b"}};
  }
  std::ofstream k(path.string() + ".key.json");
  if (!k) throw ConfigError("cannot write key file for " + path.string());
  k << key.dump(2) << '\n';
  return items.size();
}

}  // namespace goalcoach
