// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/backends/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"
#include "goalcoach/kernels/kernels.hpp"

namespace goalcoach {
namespace {

constexpr char kMagic[4] = {'G', 'C', 'L', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw SchemaError("truncated linear model payload");
  return v;
}

}  // namespace

void FeatureBuilder::add(std::string_view name, float value) {
  const auto h = static_cast<std::uint32_t>(fnv1a64(name) ^ (fnv1a64(name) >> 32));
  features_.push_back({h & mask_, value});
}

void FeatureBuilder::add(std::string_view prefix, std::string_view name, float value) {
  std::string key;
  key.reserve(prefix.size() + name.size() + 1);
  key.append(prefix).push_back('=');
  key.append(name);
  add(key, value);
}

HashedLinearModel::HashedLinearModel(int dim_bits, int outputs, Loss loss)
    : dim_bits_(dim_bits),
      outputs_(outputs),
      loss_(loss),
      weights_((std::size_t{1} << dim_bits) * static_cast<std::size_t>(outputs), 0.0F),
      bias_(static_cast<std::size_t>(outputs), 0.0F) {
  if (dim_bits < 1 || dim_bits > 24 || outputs < 1) {
    throw ConfigError("invalid linear model shape");
  }
}

std::span<float> HashedLinearModel::row(std::uint32_t index) {
  return {weights_.data() + static_cast<std::size_t>(index) * outputs_,
          static_cast<std::size_t>(outputs_)};
}

std::span<const float> HashedLinearModel::row(std::uint32_t index) const {
  return {weights_.data() + static_cast<std::size_t>(index) * outputs_,
          static_cast<std::size_t>(outputs_)};
}

void HashedLinearModel::scores(std::span<const Feature> features, std::span<float> out) const {
  std::copy(bias_.begin(), bias_.end(), out.begin());
  for (const Feature& f : features) kernels::axpy(f.value, row(f.index), out);
}

std::vector<float> HashedLinearModel::predict(std::span<const Feature> features) const {
  std::vector<float> out(static_cast<std::size_t>(outputs_));
  scores(features, out);
  if (loss_ == Loss::kSoftmax) kernels::softmax(out);
  if (loss_ == Loss::kSigmoid) kernels::sigmoid(out);
  return out;
}

FitStats HashedLinearModel::fit(const std::vector<Example>& data, const FitOptions& opts) {
  FitStats stats;
  if (data.empty()) return stats;
  const auto k = static_cast<std::size_t>(outputs_);
  const std::size_t rows = std::size_t{1} << dim_bits_;

  std::vector<float> m(weights_.size(), 0.0F), v(weights_.size(), 0.0F);
  std::vector<float> grad(weights_.size(), 0.0F);
  std::vector<float> bm(k, 0.0F), bv(k, 0.0F), bgrad(k, 0.0F);
  std::vector<char> touched(rows, 0);
  std::vector<std::uint32_t> touched_rows;

  const std::size_t batch = static_cast<std::size_t>(std::max(1, opts.batch_size));
  const long steps_per_epoch = static_cast<long>((data.size() + batch - 1) / batch);
  const long total_steps = steps_per_epoch * std::max(1, opts.epochs);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(opts.seed);
  std::vector<float> out(k), delta(k);

  kernels::AdamParams adam;
  adam.weight_decay = static_cast<float>(opts.weight_decay);

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      const float inv_batch = 1.0F / static_cast<float>(end - start);
      for (std::size_t bi = start; bi < end; ++bi) {
        const Example& ex = data[order[bi]];
        if (ex.target.size() != k) throw ValidationError("example target width mismatch");
        scores(ex.features, out);
        if (loss_ == Loss::kSoftmax) kernels::softmax(out);
        if (loss_ == Loss::kSigmoid) kernels::sigmoid(out);
        for (std::size_t j = 0; j < k; ++j) {
          const float y = ex.target[j];
          const float p = out[j];
          delta[j] = (p - y) * inv_batch;
          switch (loss_) {
            case Loss::kSoftmax:
              if (y > 0.0F) epoch_loss -= y * std::log(std::max(p, 1e-12F));
              break;
            case Loss::kSigmoid:
              epoch_loss -= y * std::log(std::max(p, 1e-12F)) +
                            (1.0F - y) * std::log(std::max(1.0F - p, 1e-12F));
              break;
            case Loss::kSquared:
              epoch_loss += 0.5 * (p - y) * (p - y);
              break;
          }
        }
        kernels::axpy(1.0F, delta, bgrad);
        for (const Feature& f : ex.features) {
          if (!touched[f.index]) {
            touched[f.index] = 1;
            touched_rows.push_back(f.index);
          }
          kernels::axpy(f.value, delta,
                        std::span<float>(grad.data() + static_cast<std::size_t>(f.index) * k, k));
        }
      }

      ++stats.steps;
      const double warm = opts.warmup_steps > 0
                              ? std::min(1.0, static_cast<double>(stats.steps) / opts.warmup_steps)
                              : 1.0;
      const double decay =
          stats.steps <= opts.warmup_steps
              ? 1.0
              : std::max(0.0, static_cast<double>(total_steps - stats.steps + 1) /
                                  static_cast<double>(std::max<long>(1, total_steps - opts.warmup_steps)));
      adam.lr = static_cast<float>(opts.learning_rate * warm * decay);
      adam.bias_correction1 = 1.0F - std::pow(adam.beta1, static_cast<float>(stats.steps));
      adam.bias_correction2 = 1.0F - std::pow(adam.beta2, static_cast<float>(stats.steps));

      for (std::uint32_t r : touched_rows) {
        const std::size_t off = static_cast<std::size_t>(r) * k;
        kernels::adam_update(std::span<float>(weights_.data() + off, k),
                             std::span<float>(m.data() + off, k), std::span<float>(v.data() + off, k),
                             std::span<const float>(grad.data() + off, k), adam);
        std::fill_n(grad.data() + off, k, 0.0F);
        touched[r] = 0;
      }
      touched_rows.clear();
      kernels::AdamParams bias_adam = adam;
      bias_adam.weight_decay = 0.0F;
      kernels::adam_update(bias_, bm, bv, bgrad, bias_adam);
      std::fill(bgrad.begin(), bgrad.end(), 0.0F);
    }
    stats.epoch_loss.push_back(epoch_loss / static_cast<double>(data.size()));
  }
  return stats;
}

void HashedLinearModel::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kFormatVersion);
  write_pod(out, static_cast<std::int32_t>(dim_bits_));
  write_pod(out, static_cast<std::int32_t>(outputs_));
  write_pod(out, static_cast<std::uint8_t>(loss_));
  out.write(reinterpret_cast<const char*>(bias_.data()),
            static_cast<std::streamsize>(bias_.size() * sizeof(float)));
  const std::size_t rows = std::size_t{1} << dim_bits_;
  std::uint32_t nonzero = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    auto w = row(static_cast<std::uint32_t>(r));
    if (std::any_of(w.begin(), w.end(), [](float x) { return x != 0.0F; })) ++nonzero;
  }
  write_pod(out, nonzero);
  for (std::size_t r = 0; r < rows; ++r) {
    auto w = row(static_cast<std::uint32_t>(r));
    if (std::none_of(w.begin(), w.end(), [](float x) { return x != 0.0F; })) continue;
    write_pod(out, static_cast<std::uint32_t>(r));
    out.write(reinterpret_cast<const char*>(w.data()),
              static_cast<std::streamsize>(w.size() * sizeof(float)));
  }
}

HashedLinearModel HashedLinearModel::load(std::istream& in) {
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw SchemaError("not a linear model payload");
  }
  if (read_pod<std::uint32_t>(in) != kFormatVersion) throw SchemaError("unsupported model version");
  const auto dim_bits = read_pod<std::int32_t>(in);
  const auto outputs = read_pod<std::int32_t>(in);
  const auto loss = read_pod<std::uint8_t>(in);
  if (loss > 2) throw SchemaError("unknown loss id");
  HashedLinearModel model(dim_bits, outputs, static_cast<Loss>(loss));
  in.read(reinterpret_cast<char*>(model.bias_.data()),
          static_cast<std::streamsize>(model.bias_.size() * sizeof(float)));
  const auto nonzero = read_pod<std::uint32_t>(in);
  const std::size_t rows = std::size_t{1} << dim_bits;
  for (std::uint32_t i = 0; i < nonzero; ++i) {
    const auto r = read_pod<std::uint32_t>(in);
    if (r >= rows) throw SchemaError("row index out of range");
    auto w = model.row(r);
    in.read(reinterpret_cast<char*>(w.data()), static_cast<std::streamsize>(w.size() * sizeof(float)));
  }
  if (!in) throw SchemaError("truncated linear model payload");
  return model;
}

}  // namespace goalcoach
