// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>
#include <vector>

#include "goalcoach/kernels/kernels.hpp"

using namespace goalcoach::kernels;

namespace {

std::vector<float> random_vec(std::mt19937& rng, std::size_t n, float lo = -2.0F, float hi = 2.0F) {
  std::uniform_real_distribution<float> d(lo, hi);
  std::vector<float> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

bool bit_equal(const std::vector<float>& a, const std::vector<float>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

// Lengths that exercise empty input, partial vectors and the unrolled tails.
const std::vector<std::size_t> kLengths = {0, 1, 3, 7, 8, 9, 15, 16, 17, 31, 32, 33, 64, 100, 257, 1000};

std::vector<Isa> simd_isas() {
  std::vector<Isa> out;
  for (Isa i : {Isa::kAvx2, Isa::kNeon}) {
    if (isa_available(i)) out.push_back(i);
  }
  return out;
}

}  // namespace

TEST_CASE("scalar table is always available") {
  CHECK(isa_available(Isa::kScalar));
  CHECK(table(Isa::kScalar).isa == Isa::kScalar);
  CHECK(isa_name(Isa::kScalar) == "scalar");
  CHECK(isa_available(active().isa));
  for (Isa i : {Isa::kAvx2, Isa::kNeon}) {
    if (!isa_available(i)) CHECK_THROWS_AS(table(i), std::invalid_argument);
  }
}

TEST_CASE("scalar reference values") {
  const std::vector<float> a = {1, 2, 3, 4, 5};
  const std::vector<float> b = {5, 4, 3, 2, 1};
  const auto& s = table(Isa::kScalar);
  CHECK(s.dot(a.data(), b.data(), 5) == 35.0F);
  CHECK(s.sum(a.data(), 5) == 15.0F);
  CHECK(s.max(b.data(), 5) == 5.0F);
  std::vector<float> y = b;
  s.axpy(2.0F, a.data(), y.data(), 5);
  CHECK(y == std::vector<float>{7, 8, 9, 10, 11});
  s.scale(0.5F, y.data(), 5);
  CHECK(y == std::vector<float>{3.5F, 4, 4.5F, 5, 5.5F});
  CHECK(s.dot(a.data(), b.data(), 0) == 0.0F);
  CHECK(s.sum(a.data(), 0) == 0.0F);
}

TEST_CASE("adam step matches the textbook update") {
  AdamParams p;
  p.lr = 0.1F;
  p.bias_correction1 = 1.0F - p.beta1;
  p.bias_correction2 = 1.0F - p.beta2;
  std::vector<float> w = {1.0F, -1.0F};
  std::vector<float> m(2, 0.0F);
  std::vector<float> v(2, 0.0F);
  const std::vector<float> g = {0.5F, -2.0F};
  table(Isa::kScalar).adam(w.data(), m.data(), v.data(), g.data(), 2, p);
  // First step: m_hat = g, v_hat = g^2, so the move is lr * sign(g) up to eps.
  CHECK(w[0] == doctest::Approx(0.9).epsilon(1e-5));
  CHECK(w[1] == doctest::Approx(-0.9).epsilon(1e-5));
  CHECK(m[0] == doctest::Approx(0.05));
  CHECK(v[1] == doctest::Approx(0.004));
}

TEST_CASE("simd elementwise kernels are bit-identical to scalar") {
  const auto isas = simd_isas();
  if (isas.empty()) {
    MESSAGE("no SIMD variant available on this host");
    return;
  }
  std::mt19937 rng(5);
  const auto& ref = table(Isa::kScalar);
  for (Isa isa : isas) {
    CAPTURE(isa_name(isa));
    const auto& t = table(isa);
    for (std::size_t n : kLengths) {
      CAPTURE(n);
      for (int rep = 0; rep < 5; ++rep) {
        const auto x = random_vec(rng, n);
        const auto y0 = random_vec(rng, n);
        const float alpha = std::uniform_real_distribution<float>(-3.0F, 3.0F)(rng);

        auto y1 = y0;
        auto y2 = y0;
        ref.axpy(alpha, x.data(), y1.data(), n);
        t.axpy(alpha, x.data(), y2.data(), n);
        CHECK(bit_equal(y1, y2));

        y1 = y0;
        y2 = y0;
        ref.scale(alpha, y1.data(), n);
        t.scale(alpha, y2.data(), n);
        CHECK(bit_equal(y1, y2));

        AdamParams p;
        p.lr = 0.01F;
        p.weight_decay = rep % 2 ? 0.01F : 0.0F;
        p.bias_correction1 = 1.0F - std::pow(p.beta1, static_cast<float>(rep + 1));
        p.bias_correction2 = 1.0F - std::pow(p.beta2, static_cast<float>(rep + 1));
        auto w1 = x;
        auto w2 = x;
        auto m1 = random_vec(rng, n, -0.1F, 0.1F);
        auto m2 = m1;
        auto v1 = random_vec(rng, n, 0.0F, 0.1F);
        auto v2 = v1;
        ref.adam(w1.data(), m1.data(), v1.data(), y0.data(), n, p);
        t.adam(w2.data(), m2.data(), v2.data(), y0.data(), n, p);
        CHECK(bit_equal(w1, w2));
        CHECK(bit_equal(m1, m2));
        CHECK(bit_equal(v1, v2));

        if (n > 0) CHECK(ref.max(x.data(), n) == t.max(x.data(), n));
      }
    }
  }
}

TEST_CASE("simd reductions agree with scalar up to summation order") {
  const auto isas = simd_isas();
  if (isas.empty()) return;
  std::mt19937 rng(6);
  const auto& ref = table(Isa::kScalar);
  for (Isa isa : isas) {
    const auto& t = table(isa);
    for (std::size_t n : kLengths) {
      CAPTURE(n);
      const auto a = random_vec(rng, n);
      const auto b = random_vec(rng, n);
      double exact_dot = 0.0;
      double abs_dot = 0.0;
      double exact_sum = 0.0;
      double abs_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        exact_dot += static_cast<double>(a[i]) * b[i];
        abs_dot += std::fabs(static_cast<double>(a[i]) * b[i]);
        exact_sum += a[i];
        abs_sum += std::fabs(a[i]);
      }
      const double tol_dot = 1e-6 * (abs_dot + 1.0) * static_cast<double>(n + 1);
      const double tol_sum = 1e-6 * (abs_sum + 1.0) * static_cast<double>(n + 1);
      CHECK(std::fabs(t.dot(a.data(), b.data(), n) - exact_dot) <= tol_dot);
      CHECK(std::fabs(ref.dot(a.data(), b.data(), n) - exact_dot) <= tol_dot);
      CHECK(std::fabs(t.sum(a.data(), n) - exact_sum) <= tol_sum);
      CHECK(std::fabs(ref.sum(a.data(), n) - exact_sum) <= tol_sum);
    }
  }
}

TEST_CASE("span wrappers use the active table") {
  std::vector<float> a(4, 1.0F);
  std::vector<float> b = {1, 2, 3, 4};
  CHECK(dot(a, b) == 10.0F);
  CHECK(sum(b) == 10.0F);
  CHECK(max(b) == 4.0F);
  axpy(2.0F, a, b);
  CHECK(b == std::vector<float>{3, 4, 5, 6});
  scale(0.5F, b);
  CHECK(b == std::vector<float>{1.5F, 2, 2.5F, 3});
}

TEST_CASE("softmax and sigmoid") {
  std::vector<float> x = {1000.0F, 1000.0F, -1000.0F};
  softmax(x);
  CHECK(x[0] == doctest::Approx(0.5));
  CHECK(x[1] == doctest::Approx(0.5));
  CHECK(x[2] == doctest::Approx(0.0));

  std::mt19937 rng(7);
  for (std::size_t n : kLengths) {
    if (n == 0) continue;
    auto v = random_vec(rng, n, -30.0F, 30.0F);
    const auto orig = v;
    softmax(v);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(v[i] >= 0.0F);
      total += v[i];
      for (std::size_t j = 0; j < n; j += 17) {
        if (orig[i] > orig[j]) CHECK(v[i] >= v[j]);
      }
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-5));
  }

  std::vector<float> s = {0.0F, 80.0F, -80.0F, 2.0F};
  sigmoid(s);
  CHECK(s[0] == 0.5F);
  CHECK(s[1] == doctest::Approx(1.0));
  CHECK(s[2] == doctest::Approx(0.0));
  CHECK(s[3] == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))));
  for (float y : s) CHECK(std::isfinite(y));
}
