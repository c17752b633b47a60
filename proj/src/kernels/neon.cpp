// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include <arm_neon.h>

#include <cmath>
#include <limits>

#include "goalcoach/kernels/kernels.hpp"

namespace goalcoach::kernels::neon {

float dot(const float* a, const float* b, std::size_t n) {
  float32x4_t acc0 = vdupq_n_f32(0.0F);
  float32x4_t acc1 = vdupq_n_f32(0.0F);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = vfmaq_f32(acc0, vld1q_f32(a + i), vld1q_f32(b + i));
    acc1 = vfmaq_f32(acc1, vld1q_f32(a + i + 4), vld1q_f32(b + i + 4));
  }
  float acc = vaddvq_f32(vaddq_f32(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(float alpha, const float* x, float* y, std::size_t n) {
  const float32x4_t va = vdupq_n_f32(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    vst1q_f32(y + i, vaddq_f32(vld1q_f32(y + i), vmulq_f32(va, vld1q_f32(x + i))));
  }
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

float sum(const float* x, std::size_t n) {
  float32x4_t acc = vdupq_n_f32(0.0F);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = vaddq_f32(acc, vld1q_f32(x + i));
  float total = vaddvq_f32(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

float max(const float* x, std::size_t n) {
  float best = -std::numeric_limits<float>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    float32x4_t vbest = vdupq_n_f32(best);
    for (; i + 4 <= n; i += 4) vbest = vmaxq_f32(vbest, vld1q_f32(x + i));
    best = vmaxvq_f32(vbest);
  }
  for (; i < n; ++i) best = x[i] > best ? x[i] : best;
  return best;
}

void scale(float alpha, float* x, std::size_t n) {
  const float32x4_t va = vdupq_n_f32(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) vst1q_f32(x + i, vmulq_f32(vld1q_f32(x + i), va));
  for (; i < n; ++i) x[i] = x[i] * alpha;
}

void adam(float* w, float* m, float* v, const float* g, std::size_t n, const AdamParams& p) {
  const float one_minus_b1 = 1.0F - p.beta1;
  const float one_minus_b2 = 1.0F - p.beta2;
  const float inv_bc1 = 1.0F / p.bias_correction1;
  const float inv_bc2 = 1.0F / p.bias_correction2;
  const float32x4_t b1 = vdupq_n_f32(p.beta1), b2 = vdupq_n_f32(p.beta2);
  const float32x4_t c1 = vdupq_n_f32(one_minus_b1), c2 = vdupq_n_f32(one_minus_b2);
  const float32x4_t ib1 = vdupq_n_f32(inv_bc1), ib2 = vdupq_n_f32(inv_bc2);
  const float32x4_t eps = vdupq_n_f32(p.eps), wd = vdupq_n_f32(p.weight_decay);
  const float32x4_t lr = vdupq_n_f32(p.lr);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float32x4_t gi = vld1q_f32(g + i);
    const float32x4_t wi = vld1q_f32(w + i);
    const float32x4_t mi = vaddq_f32(vmulq_f32(b1, vld1q_f32(m + i)), vmulq_f32(c1, gi));
    const float32x4_t vi =
        vaddq_f32(vmulq_f32(b2, vld1q_f32(v + i)), vmulq_f32(c2, vmulq_f32(gi, gi)));
    vst1q_f32(m + i, mi);
    vst1q_f32(v + i, vi);
    const float32x4_t mhat = vmulq_f32(mi, ib1);
    const float32x4_t vhat = vmulq_f32(vi, ib2);
    const float32x4_t step =
        vaddq_f32(vdivq_f32(mhat, vaddq_f32(vsqrtq_f32(vhat), eps)), vmulq_f32(wd, wi));
    vst1q_f32(w + i, vsubq_f32(wi, vmulq_f32(lr, step)));
  }
  for (; i < n; ++i) {
    m[i] = p.beta1 * m[i] + one_minus_b1 * g[i];
    v[i] = p.beta2 * v[i] + one_minus_b2 * (g[i] * g[i]);
    const float mhat = m[i] * inv_bc1;
    const float vhat = v[i] * inv_bc2;
    const float step = mhat / (std::sqrt(vhat) + p.eps) + p.weight_decay * w[i];
    w[i] = w[i] - p.lr * step;
  }
}

}  // namespace goalcoach::kernels::neon
