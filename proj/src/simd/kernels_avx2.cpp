// SPDX-License-Identifier: Apache-2.0
// AVX2 + FMA kernels. Built with -mavx2 -mfma; only reached after the
// runtime CPU check in dispatch.cpp succeeds.

#include <immintrin.h>

#include <cmath>

#include "nslice/simd/kernels.hpp"

namespace nslice::simd {
namespace {

// Register tile: ROWS rows of C by 8 columns (two ymm accumulators per row).
template <int ROWS>
inline void gemm_tile8(std::size_t k, const double* a, std::size_t lda, const double* b,
                       std::size_t ldb, double* c, std::size_t ldc, bool accumulate) {
  __m256d lo[ROWS];
  __m256d hi[ROWS];
  for (int r = 0; r < ROWS; ++r) {
    if (accumulate) {
      lo[r] = _mm256_loadu_pd(c + r * ldc);
      hi[r] = _mm256_loadu_pd(c + r * ldc + 4);
    } else {
      lo[r] = _mm256_setzero_pd();
      hi[r] = _mm256_setzero_pd();
    }
  }
  for (std::size_t p = 0; p < k; ++p) {
    const __m256d b0 = _mm256_loadu_pd(b + p * ldb);
    const __m256d b1 = _mm256_loadu_pd(b + p * ldb + 4);
    for (int r = 0; r < ROWS; ++r) {
      const __m256d ar = _mm256_broadcast_sd(a + r * lda + p);
      lo[r] = _mm256_fmadd_pd(ar, b0, lo[r]);
      hi[r] = _mm256_fmadd_pd(ar, b1, hi[r]);
    }
  }
  for (int r = 0; r < ROWS; ++r) {
    _mm256_storeu_pd(c + r * ldc, lo[r]);
    _mm256_storeu_pd(c + r * ldc + 4, hi[r]);
  }
}

template <int ROWS>
inline void gemm_tile4(std::size_t k, const double* a, std::size_t lda, const double* b,
                       std::size_t ldb, double* c, std::size_t ldc, bool accumulate) {
  __m256d acc[ROWS];
  for (int r = 0; r < ROWS; ++r) {
    acc[r] = accumulate ? _mm256_loadu_pd(c + r * ldc) : _mm256_setzero_pd();
  }
  for (std::size_t p = 0; p < k; ++p) {
    const __m256d bv = _mm256_loadu_pd(b + p * ldb);
    for (int r = 0; r < ROWS; ++r) {
      acc[r] = _mm256_fmadd_pd(_mm256_broadcast_sd(a + r * lda + p), bv, acc[r]);
    }
  }
  for (int r = 0; r < ROWS; ++r) _mm256_storeu_pd(c + r * ldc, acc[r]);
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
  for (; j + 8 <= n; j += 8) gemm_tile8<ROWS>(k, a, lda, b + j, ldb, c + j, ldc, accumulate);
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
    for (; j + 4 <= cols; j += 4) {
      _mm256_storeu_pd(row + j, _mm256_add_pd(_mm256_loadu_pd(row + j), _mm256_loadu_pd(bias + j)));
    }
    for (; j < cols; ++j) row[j] += bias[j];
  }
}

void column_sums(const double* x, std::size_t rows, std::size_t cols, double* out) {
  std::size_t j = 0;
  for (; j + 4 <= cols; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t r = 0; r < rows; ++r) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + r * cols + j));
    _mm256_storeu_pd(out + j, acc);
  }
  for (; j < cols; ++j) {
    double acc = 0.0;
    for (std::size_t r = 0; r < rows; ++r) acc += x[r * cols + j];
    out[j] = acc;
  }
}

void relu(double* x, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_max_pd(_mm256_loadu_pd(x + i), zero));
  for (; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward(const double* activated, double* grad, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(activated + i), zero, _CMP_GT_OQ);
    _mm256_storeu_pd(grad + i, _mm256_and_pd(mask, _mm256_loadu_pd(grad + i)));
  }
  for (; i < n; ++i) {
    if (!(activated[i] > 0.0)) grad[i] = 0.0;
  }
}

void tanh_backward(const double* activated, double* grad, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d y = _mm256_loadu_pd(activated + i);
    const __m256d slope = _mm256_fnmadd_pd(y, y, one);
    _mm256_storeu_pd(grad + i, _mm256_mul_pd(_mm256_loadu_pd(grad + i), slope));
  }
  for (; i < n; ++i) grad[i] *= 1.0 - activated[i] * activated[i];
}

void adam_update(double* param, double* m, double* v, const double* g, std::size_t n,
                 const AdamCoefficients& c) {
  const __m256d beta1 = _mm256_set1_pd(c.beta1);
  const __m256d beta2 = _mm256_set1_pd(c.beta2);
  const __m256d one_minus_beta1 = _mm256_set1_pd(1.0 - c.beta1);
  const __m256d one_minus_beta2 = _mm256_set1_pd(1.0 - c.beta2);
  const __m256d bc1 = _mm256_set1_pd(c.bias_correction1);
  const __m256d bc2 = _mm256_set1_pd(c.bias_correction2);
  const __m256d lr = _mm256_set1_pd(c.learning_rate);
  const __m256d eps = _mm256_set1_pd(c.epsilon);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gi = _mm256_loadu_pd(g + i);
    const __m256d mi = _mm256_fmadd_pd(beta1, _mm256_loadu_pd(m + i), _mm256_mul_pd(one_minus_beta1, gi));
    const __m256d vi = _mm256_fmadd_pd(beta2, _mm256_loadu_pd(v + i),
                                       _mm256_mul_pd(one_minus_beta2, _mm256_mul_pd(gi, gi)));
    _mm256_storeu_pd(m + i, mi);
    _mm256_storeu_pd(v + i, vi);
    const __m256d m_hat = _mm256_div_pd(mi, bc1);
    const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(_mm256_div_pd(vi, bc2)), eps);
    const __m256d step = _mm256_div_pd(_mm256_mul_pd(lr, m_hat), denom);
    _mm256_storeu_pd(param + i, _mm256_sub_pd(_mm256_loadu_pd(param + i), step));
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
  const __m256d t = _mm256_set1_pd(tau);
  const __m256d keep = _mm256_set1_pd(1.0 - tau);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d kept = _mm256_mul_pd(keep, _mm256_loadu_pd(target + i));
    _mm256_storeu_pd(target + i, _mm256_fmadd_pd(t, _mm256_loadu_pd(source + i), kept));
  }
  for (; i < n; ++i) target[i] = tau * source[i] + (1.0 - tau) * target[i];
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{
      "avx2", gemm, add_row_bias, column_sums, relu, relu_backward, tanh_backward, adam_update, lerp,
  };
  return &table;
}

}  // namespace nslice::simd
