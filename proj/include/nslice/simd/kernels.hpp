// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace nslice::simd {

/// Per-call constants for one bias-corrected Adam update.
struct AdamCoefficients {
  double learning_rate;
  double beta1;
  double beta2;
  double epsilon;
  double bias_correction1;  // 1 - beta1^t
  double bias_correction2;  // 1 - beta2^t
};

/// Data-parallel inner loops used by the dense network engine.
///
/// Every entry point exists in a scalar reference form; vector variants
/// must agree with it up to floating-point contraction (FMA) and are
/// equivalence-tested against it. All matrices are row-major with an
/// explicit leading dimension.
struct KernelTable {
  std::string_view name;

  /// C(m x n) = A(m x k) * B(k x n), or C += A * B when `accumulate`.
  void (*gemm)(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
               const double* b, std::size_t ldb, double* c, std::size_t ldc, bool accumulate);

  /// y[r, :] += bias for every row r.
  void (*add_row_bias)(double* y, std::size_t rows, std::size_t cols, const double* bias);

  /// out[j] = sum_r x[r, j].
  void (*column_sums)(const double* x, std::size_t rows, std::size_t cols, double* out);

  /// x = max(x, 0).
  void (*relu)(double* x, std::size_t n);

  /// grad *= (activated > 0). relu'(0) is taken as 0.
  void (*relu_backward)(const double* activated, double* grad, std::size_t n);

  /// grad *= 1 - activated^2.
  void (*tanh_backward)(const double* activated, double* grad, std::size_t n);

  void (*adam_update)(double* param, double* first_moment, double* second_moment,
                      const double* grad, std::size_t n, const AdamCoefficients& coeffs);

  /// target = tau * source + (1 - tau) * target.
  void (*lerp)(double* target, const double* source, double tau, std::size_t n);
};

const KernelTable& scalar_kernels();

/// nullptr when the variant was not compiled for this target.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

bool cpu_has_avx2_fma();

/// Kernels usable on the running CPU, scalar first.
std::vector<const KernelTable*> available_kernels();

/// The process-wide selection. Chosen on first use: the NSLICE_SIMD
/// environment variable (scalar | avx2 | neon | auto) wins, otherwise the
/// widest supported variant.
const KernelTable& active_kernels();

/// Overrides the process-wide selection. Throws std::invalid_argument for
/// unknown or unsupported names. "auto" restores the default choice.
void select_kernels(std::string_view name);

}  // namespace nslice::simd
