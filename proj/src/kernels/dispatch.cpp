// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include <cassert>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "goalcoach/kernels/kernels.hpp"

namespace goalcoach::kernels {
namespace {

constexpr KernelTable kScalarTable{Isa::kScalar, scalar::dot, scalar::axpy, scalar::sum,
                                   scalar::max,  scalar::scale, scalar::adam};
#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2Table{Isa::kAvx2, avx2::dot, avx2::axpy, avx2::sum,
                                 avx2::max,  avx2::scale, avx2::adam};
#endif
#if defined(__aarch64__)
constexpr KernelTable kNeonTable{Isa::kNeon, neon::dot, neon::axpy, neon::sum,
                                 neon::max,  neon::scale, neon::adam};
#endif

const KernelTable& select() {
  const char* forced = std::getenv("GOALCOACH_ISA");
  if (forced != nullptr) {
    const std::string name(forced);
    if (name == "scalar") return kScalarTable;
    if (name == "avx2" && isa_available(Isa::kAvx2)) return table(Isa::kAvx2);
    if (name == "neon" && isa_available(Isa::kNeon)) return table(Isa::kNeon);
  }
  if (isa_available(Isa::kAvx2)) return table(Isa::kAvx2);
  if (isa_available(Isa::kNeon)) return table(Isa::kNeon);
  return kScalarTable;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("kernel ISA '" + std::string(isa_name(isa)) + "' not available");
  }
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::kAvx2: return kAvx2Table;
#endif
#if defined(__aarch64__)
    case Isa::kNeon: return kNeonTable;
#endif
    default: return kScalarTable;
  }
}

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

float dot(std::span<const float> a, std::span<const float> b) {
  assert(a.size() == b.size());
  return active().dot(a.data(), b.data(), a.size());
}

void axpy(float alpha, std::span<const float> x, std::span<float> y) {
  assert(x.size() == y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

float sum(std::span<const float> x) { return active().sum(x.data(), x.size()); }
float max(std::span<const float> x) { return active().max(x.data(), x.size()); }
void scale(float alpha, std::span<float> x) { active().scale(alpha, x.data(), x.size()); }

void adam_update(std::span<float> w, std::span<float> m, std::span<float> v,
                 std::span<const float> grad, const AdamParams& p) {
  assert(w.size() == m.size() && w.size() == v.size() && w.size() == grad.size());
  active().adam(w.data(), m.data(), v.data(), grad.data(), w.size(), p);
}

void softmax(std::span<float> x) {
  if (x.empty()) return;
  const float peak = max(x);
  for (float& v : x) v = std::exp(v - peak);
  const float total = sum(x);
  scale(1.0F / total, x);
}

void sigmoid(std::span<float> x) {
  for (float& v : x) v = 1.0F / (1.0F + std::exp(-v));
}

}  // namespace goalcoach::kernels
