// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "nslice/simd/kernels.hpp"

namespace nslice::simd {

#if !NSLICE_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif
#if !NSLICE_HAVE_NEON
const KernelTable* neon_kernels() { return nullptr; }
#endif

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (const KernelTable* t = avx2_kernels(); t != nullptr && cpu_has_avx2_fma()) out.push_back(t);
  // NEON is architecturally guaranteed on AArch64.
  if (const KernelTable* t = neon_kernels(); t != nullptr) out.push_back(t);
  return out;
}

namespace {

const KernelTable* find_kernels(std::string_view name) {
  if (name == "auto") return available_kernels().back();
  for (const KernelTable* t : available_kernels()) {
    if (t->name == name) return t;
  }
  return nullptr;
}

const KernelTable* initial_selection() {
  if (const char* env = std::getenv("NSLICE_SIMD"); env != nullptr && *env != '\0') {
    if (const KernelTable* t = find_kernels(env)) return t;
    throw std::invalid_argument(std::string("NSLICE_SIMD names an unavailable kernel set: ") + env);
  }
  return available_kernels().back();
}

std::atomic<const KernelTable*>& selection() {
  static std::atomic<const KernelTable*> current{initial_selection()};
  return current;
}

}  // namespace

const KernelTable& active_kernels() { return *selection().load(std::memory_order_acquire); }

void select_kernels(std::string_view name) {
  const KernelTable* t = find_kernels(name);
  if (t == nullptr) throw std::invalid_argument("unavailable kernel set: " + std::string(name));
  selection().store(t, std::memory_order_release);
}

}  // namespace nslice::simd
