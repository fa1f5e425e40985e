// SPDX-License-Identifier: Apache-2.0
// AArch64 Advanced SIMD kernels (two doubles per register).

#include <arm_neon.h>

#include <cmath>

#include "nslice/simd/kernels.hpp"

namespace nslice::simd {
namespace {

template <int ROWS>
inline void gemm_tile4(std::size_t k, const double* a, std::size_t lda, const double* b,
                       std::size_t ldb, double* c, std::size_t ldc, bool accumulate) {
  float64x2_t lo[ROWS];
  float64x2_t hi[ROWS];
  for (int r = 0; r < ROWS; ++r) {
    if (accumulate) {
      lo[r] = vld1q_f64(c + r * ldc);
      hi[r] = vld1q_f64(c + r * ldc + 2);
    } else {
      lo[r] = vdupq_n_f64(0.0);
      hi[r] = vdupq_n_f64(0.0);
    }
  }
  for (std::size_t p = 0; p < k; ++p) {
    const float64x2_t b0 = vld1q_f64(b + p * ldb);
    const float64x2_t b1 = vld1q_f64(b + p * ldb + 2);
    for (int r = 0; r < ROWS; ++r) {
      const float64x2_t ar = vdupq_n_f64(a[r * lda + p]);
      lo[r] = vfmaq_f64(lo[r], ar, b0);
      hi[r] = vfmaq_f64(hi[r], ar, b1);
    }
  }
  for (int r = 0; r < ROWS; ++r) {
    vst1q_f64(c + r * ldc, lo[r]);
    vst1q_f64(c + r * ldc + 2, hi[r]);
  }
}

template <int ROWS>
inline void gemm_tile1(std::size_t k, const double* a, std::size_t lda, const double* b,
                       std::size_t ldb, double* c, std::size_t ldc, bool accumulate) {
  double acc[ROWS];
  for (int r = 0; r < ROWS; ++r) acc[r] = accumulate ? c[r * ldc] : 0.0;
  for (std::size_t p = 0; p < k; ++p) {
    const double bp = b[p * ldb];
    for (int r = 0; r < ROWS; ++r) acc[r] = std::fma(a[r * lda + p], bp, acc[r]);
  }
  for (int r = 0; r < ROWS; ++r) c[r * ldc] = acc[r];
}

template <int ROWS>
void gemm_rows(std::size_t n, std::size_t k, const double* a, std::size_t lda, const double* b,
               std::size_t ldb, double* c, std::size_t ldc, bool accumulate) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) gemm_tile4<ROWS>(k, a, lda, b + j, ldb, c + j, ldc, accumulate);
  for (; j < n; ++j) gemm_tile1<ROWS>(k, a, lda, b + j, ldb, c + j, ldc, accumulate);
}

void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
          const double* b, std::size_t ldb, double* c, std::size_t ldc, bool accumulate) {
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) gemm_rows<4>(n, k, a + i * lda, lda, b, ldb, c + i * ldc, ldc, accumulate);
  switch (m - i) {
    case 3: gemm_rows<3>(n, k, a + i * lda, lda, b, ldb, c + i * ldc, ldc, accumulate); break;
    case 2: gemm_rows<2>(n, k, a + i * lda, lda, b, ldb, c + i * ldc, ldc, accumulate); break;
    case 1: gemm_rows<1>(n, k, a + i * lda, lda, b, ldb, c + i * ldc, ldc, accumulate); break;
    default: break;
  }
}

void add_row_bias(double* y, std::size_t rows, std::size_t cols, const double* bias) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* row = y + r * cols;
    std::size_t j = 0;
    for (; j + 2 <= cols; j += 2) vst1q_f64(row + j, vaddq_f64(vld1q_f64(row + j), vld1q_f64(bias + j)));
    for (; j < cols; ++j) row[j] += bias[j];
  }
}

void column_sums(const double* x, std::size_t rows, std::size_t cols, double* out) {
  std::size_t j = 0;
  for (; j + 2 <= cols; j += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t r = 0; r < rows; ++r) acc = vaddq_f64(acc, vld1q_f64(x + r * cols + j));
    vst1q_f64(out + j, acc);
  }
  for (; j < cols; ++j) {
    double acc = 0.0;
    for (std::size_t r = 0; r < rows; ++r) acc += x[r * cols + j];
    out[j] = acc;
  }
}

void relu(double* x, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    // Select keeps NaN -> 0 consistent with the scalar reference.
    vst1q_f64(x + i, vbslq_f64(vcgtq_f64(v, zero), v, zero));
  }
  for (; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward(const double* activated, double* grad, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const uint64x2_t mask = vcgtq_f64(vld1q_f64(activated + i), zero);
    vst1q_f64(grad + i, vbslq_f64(mask, vld1q_f64(grad + i), zero));
  }
  for (; i < n; ++i) {
    if (!(activated[i] > 0.0)) grad[i] = 0.0;
  }
}

void tanh_backward(const double* activated, double* grad, std::size_t n) {
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t y = vld1q_f64(activated + i);
    vst1q_f64(grad + i, vmulq_f64(vld1q_f64(grad + i), vfmsq_f64(one, y, y)));
  }
  for (; i < n; ++i) grad[i] *= 1.0 - activated[i] * activated[i];
}

void adam_update(double* param, double* m, double* v, const double* g, std::size_t n,
                 const AdamCoefficients& c) {
  const float64x2_t beta1 = vdupq_n_f64(c.beta1);
  const float64x2_t beta2 = vdupq_n_f64(c.beta2);
  const float64x2_t one_minus_beta1 = vdupq_n_f64(1.0 - c.beta1);
  const float64x2_t one_minus_beta2 = vdupq_n_f64(1.0 - c.beta2);
  const float64x2_t bc1 = vdupq_n_f64(c.bias_correction1);
  const float64x2_t bc2 = vdupq_n_f64(c.bias_correction2);
  const float64x2_t lr = vdupq_n_f64(c.learning_rate);
  const float64x2_t eps = vdupq_n_f64(c.epsilon);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t gi = vld1q_f64(g + i);
    const float64x2_t mi = vfmaq_f64(vmulq_f64(one_minus_beta1, gi), beta1, vld1q_f64(m + i));
    const float64x2_t vi = vfmaq_f64(vmulq_f64(one_minus_beta2, vmulq_f64(gi, gi)), beta2, vld1q_f64(v + i));
    vst1q_f64(m + i, mi);
    vst1q_f64(v + i, vi);
    const float64x2_t denom = vaddq_f64(vsqrtq_f64(vdivq_f64(vi, bc2)), eps);
    const float64x2_t step = vdivq_f64(vmulq_f64(lr, vdivq_f64(mi, bc1)), denom);
    vst1q_f64(param + i, vsubq_f64(vld1q_f64(param + i), step));
  }
  for (; i < n; ++i) {
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * (g[i] * g[i]);
    const double m_hat = m[i] / c.bias_correction1;
    const double v_hat = v[i] / c.bias_correction2;
    param[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
  }
}

void lerp(double* target, const double* source, double tau, std::size_t n) {
  const float64x2_t t = vdupq_n_f64(tau);
  const float64x2_t keep = vdupq_n_f64(1.0 - tau);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(target + i, vfmaq_f64(vmulq_f64(keep, vld1q_f64(target + i)), t, vld1q_f64(source + i)));
  }
  for (; i < n; ++i) target[i] = tau * source[i] + (1.0 - tau) * target[i];
}

}  // namespace

const KernelTable* neon_kernels() {
  static const KernelTable table{
      "neon", gemm, add_row_bias, column_sums, relu, relu_backward, tanh_backward, adam_update, lerp,
  };
  return &table;
}

}  // namespace nslice::simd
