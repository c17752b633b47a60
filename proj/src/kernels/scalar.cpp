// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include "goalcoach/kernels/kernels.hpp"

namespace goalcoach::kernels::scalar {

float dot(const float* a, const float* b, std::size_t n) {
  float acc = 0.0F;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(float alpha, const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

float sum(const float* x, std::size_t n) {
  float acc = 0.0F;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

float max(const float* x, std::size_t n) {
  float best = -std::numeric_limits<float>::infinity();
  for (std::size_t i = 0; i < n; ++i) best = x[i] > best ? x[i] : best;
  return best;
}

void scale(float alpha, float* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] * alpha;
}

void adam(float* w, float* m, float* v, const float* g, std::size_t n, const AdamParams& p) {
  const float one_minus_b1 = 1.0F - p.beta1;
  const float one_minus_b2 = 1.0F - p.beta2;
  const float inv_bc1 = 1.0F / p.bias_correction1;
  const float inv_bc2 = 1.0F / p.bias_correction2;
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = p.beta1 * m[i] + one_minus_b1 * g[i];
    v[i] = p.beta2 * v[i] + one_minus_b2 * (g[i] * g[i]);
    const float mhat = m[i] * inv_bc1;
    const float vhat = v[i] * inv_bc2;
    const float step = mhat / (std::sqrt(vhat) + p.eps) + p.weight_decay * w[i];
    w[i] = w[i] - p.lr * step;
  }
}

}  // namespace goalcoach::kernels::scalar
