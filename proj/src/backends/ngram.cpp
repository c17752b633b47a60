// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/backends/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"

namespace goalcoach {
namespace {

constexpr char kSep = '\x1f';

std::string key2(const std::string& u, const std::string& v) { return u + kSep + v; }

}  // namespace

void NGramLM::add_sentence(const std::vector<std::string>& tokens, double weight) {
  if (weight <= 0.0) return;
  std::string u = kSentenceStart, v = kSentenceStart;
  auto push = [&](const std::string& w) {
    unigrams_[w] += weight;
    total_ += weight;
    auto& b = bigrams_[v];
    b.counts[w] += weight;
    b.total += weight;
    auto& t = trigrams_[key2(u, v)];
    t.counts[w] += weight;
    t.total += weight;
    trigram_counts_[key2(key2(u, v), w)] += weight;
    u = v;
    v = w;
  };
  for (const auto& w : tokens) push(w);
  push(kSentenceEnd);
  vocab_cache_.clear();
}

double NGramLM::unigram(const std::string& w) const {
  auto it = unigrams_.find(w);
  const double c = it == unigrams_.end() ? 0.0 : it->second;
  // +1 type for unknown words
  return (c + 1.0) / (total_ + static_cast<double>(unigrams_.size()) + 1.0);
}

double NGramLM::bigram(const std::string& v, const std::string& w) const {
  auto it = bigrams_.find(v);
  if (it == bigrams_.end() || it->second.total <= 0.0) return unigram(w);
  const Dist& d = it->second;
  auto cw = d.counts.find(w);
  const double c = cw == d.counts.end() ? 0.0 : cw->second;
  const double backoff = discount_ * static_cast<double>(d.counts.size()) / d.total;
  return std::max(c - discount_, 0.0) / d.total + std::min(1.0, backoff) * unigram(w);
}

double NGramLM::prob(const std::string& u, const std::string& v, const std::string& w) const {
  auto it = trigrams_.find(key2(u, v));
  if (it == trigrams_.end() || it->second.total <= 0.0) return bigram(v, w);
  const Dist& d = it->second;
  auto cw = d.counts.find(w);
  const double c = cw == d.counts.end() ? 0.0 : cw->second;
  const double backoff = discount_ * static_cast<double>(d.counts.size()) / d.total;
  return std::max(c - discount_, 0.0) / d.total + std::min(1.0, backoff) * bigram(v, w);
}

LogLikelihood NGramLM::score_sentence(const std::vector<std::string>& tokens) const {
  LogLikelihood ll;
  std::string u = kSentenceStart, v = kSentenceStart;
  auto step = [&](const std::string& w) {
    ll.log_prob += std::log(prob(u, v, w));
    ++ll.tokens;
    u = v;
    v = w;
  };
  for (const auto& w : tokens) step(w);
  step(kSentenceEnd);
  return ll;
}

const std::vector<std::string>& NGramLM::vocabulary() const {
  if (vocab_cache_.empty()) {
    std::set<std::string> words;
    for (const auto& [w, c] : unigrams_) words.insert(w);
    words.insert(kSentenceEnd);
    vocab_cache_.assign(words.begin(), words.end());
  }
  return vocab_cache_;
}

Json NGramLM::to_json() const {
  Json grams = Json::array();
  for (const auto& [key, c] : trigram_counts_) {
    auto parts = split(key, kSep);
    grams.push_back(Json::array({parts[0], parts[1], parts[2], c}));
  }
  return Json{{"discount", discount_}, {"trigrams", grams}};
}

NGramLM NGramLM::from_json(const Json& j) {
  NGramLM lm(j.value("discount", 0.75));
  for (const auto& g : j.at("trigrams")) {
    if (!g.is_array() || g.size() != 4) throw SchemaError("bad trigram record");
    const std::string u = g[0], v = g[1], w = g[2];
    const double c = g[3];
    lm.unigrams_[w] += c;
    lm.total_ += c;
    auto& b = lm.bigrams_[v];
    b.counts[w] += c;
    b.total += c;
    auto& t = lm.trigrams_[key2(u, v)];
    t.counts[w] += c;
    t.total += c;
    lm.trigram_counts_[key2(key2(u, v), w)] += c;
  }
  return lm;
}

std::size_t sample_top_k_top_p(const std::vector<double>& probs, int top_k, double top_p,
                               std::mt19937_64& rng) {
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
  std::size_t keep = order.size();
  if (top_k > 0) keep = std::min(keep, static_cast<std::size_t>(top_k));
  double total = 0.0;
  for (std::size_t i = 0; i < keep; ++i) total += probs[order[i]];
  if (top_p > 0.0 && top_p < 1.0 && total > 0.0) {
    double cum = 0.0;
    for (std::size_t i = 0; i < keep; ++i) {
      cum += probs[order[i]] / total;
      if (cum >= top_p) {
        keep = i + 1;
        break;
      }
    }
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < keep; ++i) mass += probs[order[i]];
  std::uniform_real_distribution<double> unif(0.0, mass);
  double r = unif(rng);
  for (std::size_t i = 0; i < keep; ++i) {
    r -= probs[order[i]];
    if (r <= 0.0) return order[i];
  }
  return order[keep - 1];
}

std::vector<std::string> decode_tokens(const NextTokenFn& next, const DecodeOptions& opts) {
  std::vector<std::string> out;
  std::mt19937_64 rng(opts.seed);
  for (int step = 0; step < opts.max_tokens; ++step) {
    auto dist = next(out);
    if (dist.empty()) break;
    std::vector<double> probs;
    probs.reserve(dist.size());
    for (const auto& [w, p] : dist) probs.push_back(p);
    std::size_t pick = 0;
    if (opts.sample) {
      pick = sample_top_k_top_p(probs, opts.top_k, opts.top_p, rng);
    } else {
      double best = -1.0;
      for (std::size_t i = 0; i < dist.size(); ++i) {
        if (probs[i] <= best) continue;
        if (out.size() >= 2 && dist[i].first != kSentenceEnd) {
          // no repeated trigram under greedy search
          const std::string& a = out[out.size() - 2];
          const std::string& b = out[out.size() - 1];
          bool repeat = false;
          for (std::size_t t = 0; t + 2 < out.size(); ++t) {
            if (out[t] == a && out[t + 1] == b && out[t + 2] == dist[i].first) {
              repeat = true;
              break;
            }
          }
          if (repeat) continue;
        }
        best = probs[i];
        pick = i;
      }
      if (best < 0.0) break;
    }
    if (dist[pick].first == kSentenceEnd) break;
    out.push_back(dist[pick].first);
  }
  return out;
}

void ConditionalNGram::add(const std::string& condition, const std::vector<std::string>& tokens,
                           double weight) {
  global_.add_sentence(tokens, weight);
  by_condition_[condition].add_sentence(tokens, weight);
}

std::vector<std::pair<std::string, double>> ConditionalNGram::next(
    const std::string& condition, const std::vector<std::string>& history) const {
  const std::string u = history.size() >= 2 ? history[history.size() - 2] : kSentenceStart;
  const std::string v = history.empty() ? kSentenceStart : history.back();
  auto it = by_condition_.find(condition);
  const NGramLM* cond = it == by_condition_.end() ? nullptr : &it->second;
  std::vector<std::pair<std::string, double>> out;
  const auto& vocab = global_.vocabulary();
  out.reserve(vocab.size());
  double total = 0.0;
  for (const auto& w : vocab) {
    double p = global_.prob(u, v, w);
    if (cond != nullptr) p = lambda_ * cond->prob(u, v, w) + (1.0 - lambda_) * p;
    out.emplace_back(w, p);
    total += p;
  }
  if (total > 0.0) {
    for (auto& [w, p] : out) p /= total;
  }
  return out;
}

std::vector<std::string> ConditionalNGram::generate(const std::string& condition,
                                                    const DecodeOptions& opts) const {
  if (global_.empty()) return {};
  return decode_tokens([&](const std::vector<std::string>& h) { return next(condition, h); }, opts);
}

Json ConditionalNGram::to_json() const {
  Json conds = Json::object();
  for (const auto& [c, lm] : by_condition_) conds[c] = lm.to_json();
  return Json{{"lambda", lambda_}, {"global", global_.to_json()}, {"conditions", conds}};
}

ConditionalNGram ConditionalNGram::from_json(const Json& j) {
  ConditionalNGram cg(j.value("lambda", 0.7));
  cg.global_ = NGramLM::from_json(j.at("global"));
  for (const auto& [c, lm] : j.at("conditions").items()) cg.by_condition_.emplace(c, NGramLM::from_json(lm));
  return cg;
}

}  // namespace goalcoach
