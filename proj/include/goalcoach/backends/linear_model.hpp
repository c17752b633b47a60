// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace goalcoach {

struct Feature {
  std::uint32_t index = 0;
  float value = 1.0F;
};

/// Collects string features and hashes them into [0, 2^dim_bits).
class FeatureBuilder {
 public:
  explicit FeatureBuilder(int dim_bits) : mask_((1U << dim_bits) - 1U) {}
  void add(std::string_view name, float value = 1.0F);
  void add(std::string_view prefix, std::string_view name, float value = 1.0F);
  std::vector<Feature> take() { return std::move(features_); }
  const std::vector<Feature>& features() const { return features_; }

 private:
  std::uint32_t mask_;
  std::vector<Feature> features_;
};

struct FitOptions {
  int epochs = 5;
  double learning_rate = 5e-5;
  int batch_size = 32;
  int warmup_steps = 0;
  double weight_decay = 0.0;
  std::uint64_t seed = 13;
};

struct FitStats {
  std::vector<double> epoch_loss;
  long steps = 0;
};

/// Linear model over hashed sparse features with K outputs.
///
/// Weights are stored feature-major (one K-wide row per hashed feature), so
/// scoring is a sum of rows and a training step is a per-row Adam update;
/// both run through the SIMD kernels. Trained with minibatch Adam, linear
/// warmup then linear decay, as in the usual transformer fine-tuning schedule.
class HashedLinearModel {
 public:
  enum class Loss : std::uint8_t { kSoftmax, kSigmoid, kSquared };

  struct Example {
    std::vector<Feature> features;
    std::vector<float> target;  // one-hot, multi-hot, or regression values
  };

  HashedLinearModel() = default;
  HashedLinearModel(int dim_bits, int outputs, Loss loss);

  int dim_bits() const { return dim_bits_; }
  int outputs() const { return outputs_; }
  Loss loss() const { return loss_; }

  /// Raw scores (logits / regression outputs).
  void scores(std::span<const Feature> features, std::span<float> out) const;
  /// Scores passed through the loss link (softmax / sigmoid / identity).
  std::vector<float> predict(std::span<const Feature> features) const;

  FitStats fit(const std::vector<Example>& data, const FitOptions& opts);

  void save(std::ostream& out) const;
  static HashedLinearModel load(std::istream& in);

 private:
  std::span<float> row(std::uint32_t index);
  std::span<const float> row(std::uint32_t index) const;

  int dim_bits_ = 0;
  int outputs_ = 0;
  Loss loss_ = Loss::kSoftmax;
  std::vector<float> weights_;
  std::vector<float> bias_;
};

}  // namespace goalcoach
