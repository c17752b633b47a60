// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

// Built with -mavx2 -mfma; only reached after a CPUID check in dispatch.cpp.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "goalcoach/kernels/kernels.hpp"

namespace goalcoach::kernels::avx2 {
namespace {

inline float hsum(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  __m128 shuf = _mm_movehdup_ps(lo);
  __m128 sums = _mm_add_ps(lo, shuf);
  shuf = _mm_movehl_ps(shuf, sums);
  sums = _mm_add_ss(sums, shuf);
  return _mm_cvtss_f32(sums);
}

inline float hmax(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_max_ps(lo, hi);
  __m128 shuf = _mm_movehdup_ps(lo);
  __m128 m = _mm_max_ps(lo, shuf);
  shuf = _mm_movehl_ps(shuf, m);
  m = _mm_max_ss(m, shuf);
  return _mm_cvtss_f32(m);
}

}  // namespace

float dot(const float* a, const float* b, std::size_t n) {
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
  }
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
  }
  float acc = hsum(_mm256_add_ps(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(float alpha, const float* x, float* y, std::size_t n) {
  const __m256 va = _mm256_set1_ps(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 prod = _mm256_mul_ps(va, _mm256_loadu_ps(x + i));
    _mm256_storeu_ps(y + i, _mm256_add_ps(_mm256_loadu_ps(y + i), prod));
  }
  for (; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

float sum(const float* x, std::size_t n) {
  __m256 acc = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) acc = _mm256_add_ps(acc, _mm256_loadu_ps(x + i));
  float total = hsum(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

float max(const float* x, std::size_t n) {
  float best = -std::numeric_limits<float>::infinity();
  std::size_t i = 0;
  if (n >= 8) {
    __m256 vbest = _mm256_set1_ps(best);
    for (; i + 8 <= n; i += 8) vbest = _mm256_max_ps(vbest, _mm256_loadu_ps(x + i));
    best = hmax(vbest);
  }
  for (; i < n; ++i) best = x[i] > best ? x[i] : best;
  return best;
}

void scale(float alpha, float* x, std::size_t n) {
  const __m256 va = _mm256_set1_ps(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) _mm256_storeu_ps(x + i, _mm256_mul_ps(_mm256_loadu_ps(x + i), va));
  for (; i < n; ++i) x[i] = x[i] * alpha;
}

void adam(float* w, float* m, float* v, const float* g, std::size_t n, const AdamParams& p) {
  const float one_minus_b1 = 1.0F - p.beta1;
  const float one_minus_b2 = 1.0F - p.beta2;
  const float inv_bc1 = 1.0F / p.bias_correction1;
  const float inv_bc2 = 1.0F / p.bias_correction2;
  const __m256 b1 = _mm256_set1_ps(p.beta1), b2 = _mm256_set1_ps(p.beta2);
  const __m256 c1 = _mm256_set1_ps(one_minus_b1), c2 = _mm256_set1_ps(one_minus_b2);
  const __m256 ib1 = _mm256_set1_ps(inv_bc1), ib2 = _mm256_set1_ps(inv_bc2);
  const __m256 eps = _mm256_set1_ps(p.eps), wd = _mm256_set1_ps(p.weight_decay);
  const __m256 lr = _mm256_set1_ps(p.lr);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 gi = _mm256_loadu_ps(g + i);
    const __m256 wi = _mm256_loadu_ps(w + i);
    __m256 mi = _mm256_add_ps(_mm256_mul_ps(b1, _mm256_loadu_ps(m + i)), _mm256_mul_ps(c1, gi));
    __m256 vi = _mm256_add_ps(_mm256_mul_ps(b2, _mm256_loadu_ps(v + i)),
                              _mm256_mul_ps(c2, _mm256_mul_ps(gi, gi)));
    _mm256_storeu_ps(m + i, mi);
    _mm256_storeu_ps(v + i, vi);
    const __m256 mhat = _mm256_mul_ps(mi, ib1);
    const __m256 vhat = _mm256_mul_ps(vi, ib2);
    const __m256 step = _mm256_add_ps(_mm256_div_ps(mhat, _mm256_add_ps(_mm256_sqrt_ps(vhat), eps)),
                                      _mm256_mul_ps(wd, wi));
    _mm256_storeu_ps(w + i, _mm256_sub_ps(wi, _mm256_mul_ps(lr, step)));
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

}  // namespace goalcoach::kernels::avx2
