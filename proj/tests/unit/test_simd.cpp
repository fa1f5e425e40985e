// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "nslice/simd/kernels.hpp"
#include "nslice/traffic/rng.hpp"

namespace {

using nslice::simd::KernelTable;

std::vector<double> random_vector(std::size_t n, nslice::traffic::RngStream& rng, double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

void expect_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i], b[i], tol * (1.0 + std::abs(b[i]))) << "at index " << i;
  }
}

class KernelEquivalence : public ::testing::TestWithParam<const KernelTable*> {};

TEST_P(KernelEquivalence, GemmMatchesScalarOverOddShapes) {
  const KernelTable& ref = nslice::simd::scalar_kernels();
  const KernelTable& k = *GetParam();
  nslice::traffic::RngStream rng(3, "gemm");
  for (std::size_t m : {1u, 3u, 4u, 5u, 9u, 17u}) {
    for (std::size_t n : {1u, 2u, 7u, 8u, 13u, 64u}) {
      for (std::size_t kk : {1u, 5u, 16u, 33u}) {
        const auto a = random_vector(m * kk, rng);
        const auto b = random_vector(kk * n, rng);
        for (bool accumulate : {false, true}) {
          auto c_ref = random_vector(m * n, rng);
          auto c = c_ref;
          ref.gemm(m, n, kk, a.data(), kk, b.data(), n, c_ref.data(), n, accumulate);
          k.gemm(m, n, kk, a.data(), kk, b.data(), n, c.data(), n, accumulate);
          expect_close(c, c_ref, 1e-13);
        }
      }
    }
  }
}

TEST_P(KernelEquivalence, GemmRespectsLeadingDimensions) {
  const KernelTable& ref = nslice::simd::scalar_kernels();
  const KernelTable& k = *GetParam();
  nslice::traffic::RngStream rng(4, "gemm-ld");
  const std::size_t m = 6, n = 11, kk = 7, lda = 10, ldb = 15, ldc = 19;
  const auto a = random_vector(m * lda, rng);
  const auto b = random_vector(kk * ldb, rng);
  auto c_ref = random_vector(m * ldc, rng);
  auto c = c_ref;
  ref.gemm(m, n, kk, a.data(), lda, b.data(), ldb, c_ref.data(), ldc, false);
  k.gemm(m, n, kk, a.data(), lda, b.data(), ldb, c.data(), ldc, false);
  expect_close(c, c_ref, 1e-13);
  // Padding columns stay untouched.
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t col = n; col < ldc; ++col) EXPECT_EQ(c[r * ldc + col], c_ref[r * ldc + col]);
  }
}

TEST_P(KernelEquivalence, ElementwiseKernelsMatchScalar) {
  const KernelTable& ref = nslice::simd::scalar_kernels();
  const KernelTable& k = *GetParam();
  nslice::traffic::RngStream rng(5, "elementwise");
  for (std::size_t rows : {1u, 3u, 8u}) {
    for (std::size_t cols : {1u, 3u, 4u, 9u, 64u}) {
      const std::size_t n = rows * cols;
      const auto bias = random_vector(cols, rng);
      auto y_ref = random_vector(n, rng);
      auto y = y_ref;
      ref.add_row_bias(y_ref.data(), rows, cols, bias.data());
      k.add_row_bias(y.data(), rows, cols, bias.data());
      expect_close(y, y_ref, 0.0);

      std::vector<double> s_ref(cols), s(cols);
      ref.column_sums(y_ref.data(), rows, cols, s_ref.data());
      k.column_sums(y_ref.data(), rows, cols, s.data());
      expect_close(s, s_ref, 1e-15);

      auto r_ref = y_ref;
      auto r = y_ref;
      r_ref[0] = 0.0;
      r[0] = 0.0;
      ref.relu(r_ref.data(), n);
      k.relu(r.data(), n);
      expect_close(r, r_ref, 0.0);

      auto g_ref = random_vector(n, rng);
      auto g = g_ref;
      ref.relu_backward(r_ref.data(), g_ref.data(), n);
      k.relu_backward(r_ref.data(), g.data(), n);
      expect_close(g, g_ref, 0.0);

      const auto t = random_vector(n, rng, -0.99, 0.99);
      ref.tanh_backward(t.data(), g_ref.data(), n);
      k.tanh_backward(t.data(), g.data(), n);
      expect_close(g, g_ref, 1e-15);
    }
  }
}

TEST_P(KernelEquivalence, AdamAndLerpMatchScalar) {
  const KernelTable& ref = nslice::simd::scalar_kernels();
  const KernelTable& k = *GetParam();
  nslice::traffic::RngStream rng(6, "adam");
  for (std::size_t n : {1u, 2u, 3u, 5u, 17u, 130u}) {
    auto p_ref = random_vector(n, rng);
    auto m_ref = random_vector(n, rng, -0.1, 0.1);
    auto v_ref = random_vector(n, rng, 0.0, 0.1);
    auto p = p_ref, m = m_ref, v = v_ref;
    const auto g = random_vector(n, rng);
    const nslice::simd::AdamCoefficients c{1e-3, 0.9, 0.999, 1e-8, 1.0 - std::pow(0.9, 3), 1.0 - std::pow(0.999, 3)};
    ref.adam_update(p_ref.data(), m_ref.data(), v_ref.data(), g.data(), n, c);
    k.adam_update(p.data(), m.data(), v.data(), g.data(), n, c);
    expect_close(p, p_ref, 1e-14);
    expect_close(m, m_ref, 1e-14);
    expect_close(v, v_ref, 1e-14);

    const auto src = random_vector(n, rng);
    ref.lerp(p_ref.data(), src.data(), 0.005, n);
    k.lerp(p.data(), src.data(), 0.005, n);
    expect_close(p, p_ref, 1e-14);
  }
}

std::string kernel_name(const ::testing::TestParamInfo<const KernelTable*>& info) {
  return std::string(info.param->name);
}

INSTANTIATE_TEST_SUITE_P(Available, KernelEquivalence, ::testing::ValuesIn(nslice::simd::available_kernels()),
                         kernel_name);

TEST(KernelSelection, ScalarIsAlwaysAvailableAndSelectable) {
  const auto all = nslice::simd::available_kernels();
  ASSERT_FALSE(all.empty());
  EXPECT_EQ(all.front()->name, "scalar");
  const KernelTable& before = nslice::simd::active_kernels();
  nslice::simd::select_kernels("scalar");
  EXPECT_EQ(nslice::simd::active_kernels().name, "scalar");
  nslice::simd::select_kernels("auto");
  EXPECT_EQ(nslice::simd::active_kernels().name, all.back()->name);
  nslice::simd::select_kernels(before.name);
}

TEST(KernelSelection, UnknownNameIsRejected) {
  EXPECT_THROW(nslice::simd::select_kernels("sse9"), std::invalid_argument);
}

TEST(KernelSelection, Avx2ReportedOnlyWhenSupported) {
  const bool listed = [] {
    for (const KernelTable* k : nslice::simd::available_kernels()) {
      if (k->name == "avx2") return true;
    }
    return false;
  }();
  EXPECT_EQ(listed, nslice::simd::avx2_kernels() != nullptr && nslice::simd::cpu_has_avx2_fma());
}

}  // namespace
