// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Dense float kernels behind the hashed linear models. Each kernel has a
// scalar reference and, where the target allows, an AVX2 (x86-64) or NEON
// (aarch64) variant; the variant is chosen once at startup from CPUID and
// can be forced with GOALCOACH_ISA=scalar|avx2|neon.
//
// Elementwise kernels (axpy, scale, adam_update) avoid fused multiply-add so
// every variant is bit-identical to the scalar reference. Reductions (dot,
// sum) differ only by summation order.

#include <cstddef>
#include <span>
#include <string_view>

namespace goalcoach::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa) noexcept;

struct AdamParams {
  float lr = 1e-3F;
  float beta1 = 0.9F;
  float beta2 = 0.999F;
  float eps = 1e-8F;
  float weight_decay = 0.0F;  // decoupled (AdamW); 0 gives plain Adam
  float bias_correction1 = 1.0F;  // 1 - beta1^t
  float bias_correction2 = 1.0F;  // 1 - beta2^t
};

struct KernelTable {
  Isa isa;
  float (*dot)(const float* a, const float* b, std::size_t n);
  void (*axpy)(float alpha, const float* x, float* y, std::size_t n);
  float (*sum)(const float* x, std::size_t n);
  float (*max)(const float* x, std::size_t n);
  void (*scale)(float alpha, float* x, std::size_t n);
  void (*adam)(float* w, float* m, float* v, const float* g, std::size_t n, const AdamParams& p);
};

bool isa_available(Isa isa) noexcept;
/// Throws std::invalid_argument if the ISA is not available on this host.
const KernelTable& table(Isa isa);
/// The table selected for this process.
const KernelTable& active();

float dot(std::span<const float> a, std::span<const float> b);
/// y += alpha * x
void axpy(float alpha, std::span<const float> x, std::span<float> y);
float sum(std::span<const float> x);
float max(std::span<const float> x);
void scale(float alpha, std::span<float> x);
void adam_update(std::span<float> w, std::span<float> m, std::span<float> v,
                 std::span<const float> grad, const AdamParams& p);

/// In-place numerically stable softmax.
void softmax(std::span<float> x);
/// In-place logistic function.
void sigmoid(std::span<float> x);

namespace scalar {
float dot(const float* a, const float* b, std::size_t n);
void axpy(float alpha, const float* x, float* y, std::size_t n);
float sum(const float* x, std::size_t n);
float max(const float* x, std::size_t n);
void scale(float alpha, float* x, std::size_t n);
void adam(float* w, float* m, float* v, const float* g, std::size_t n, const AdamParams& p);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
float dot(const float* a, const float* b, std::size_t n);
void axpy(float alpha, const float* x, float* y, std::size_t n);
float sum(const float* x, std::size_t n);
float max(const float* x, std::size_t n);
void scale(float alpha, float* x, std::size_t n);
void adam(float* w, float* m, float* v, const float* g, std::size_t n, const AdamParams& p);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
float dot(const float* a, const float* b, std::size_t n);
void axpy(float alpha, const float* x, float* y, std::size_t n);
float sum(const float* x, std::size_t n);
float max(const float* x, std::size_t n);
void scale(float alpha, float* x, std::size_t n);
void adam(float* w, float* m, float* v, const float* g, std::size_t n, const AdamParams& p);
}  // namespace neon
#endif

}  // namespace goalcoach::kernels
