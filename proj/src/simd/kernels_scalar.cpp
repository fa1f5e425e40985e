// SPDX-License-Identifier: Apache-2.0
// Reference kernels. This translation unit is built with -ffp-contract=off
// so results do not depend on whether the target happens to have FMA.

#include <cmath>

#include "nslice/simd/kernels.hpp"

namespace nslice::simd {
namespace {

void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
          const double* b, std::size_t ldb, double* c, std::size_t ldc, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * ldc;
    if (!accumulate) {
      for (std::size_t j = 0; j < n; ++j) crow[j] = 0.0;
    }
    const double* arow = a + i * lda;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = arow[p];
      const double* brow = b + p * ldb;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

void add_row_bias(double* y, std::size_t rows, std::size_t cols, const double* bias) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* row = y + r * cols;
    for (std::size_t j = 0; j < cols; ++j) row[j] += bias[j];
  }
}

void column_sums(const double* x, std::size_t rows, std::size_t cols, double* out) {
  for (std::size_t j = 0; j < cols; ++j) out[j] = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = x + r * cols;
    for (std::size_t j = 0; j < cols; ++j) out[j] += row[j];
  }
}

void relu(double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward(const double* activated, double* grad, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!(activated[i] > 0.0)) grad[i] = 0.0;
  }
}

void tanh_backward(const double* activated, double* grad, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) grad[i] *= 1.0 - activated[i] * activated[i];
}

void adam_update(double* param, double* m, double* v, const double* g, std::size_t n,
                 const AdamCoefficients& c) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * (g[i] * g[i]);
    const double m_hat = m[i] / c.bias_correction1;
    const double v_hat = v[i] / c.bias_correction2;
    param[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
  }
}

void lerp(double* target, const double* source, double tau, std::size_t n) {
  const double keep = 1.0 - tau;
  for (std::size_t i = 0; i < n; ++i) target[i] = tau * source[i] + keep * target[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      "scalar", gemm, add_row_bias, column_sums, relu, relu_backward, tanh_backward, adam_update, lerp,
  };
  return table;
}

}  // namespace nslice::simd
