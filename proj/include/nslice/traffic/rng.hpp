// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>

namespace nslice::traffic {

/// Counter-based random stream.
///
/// Output i is a SplitMix64 finalisation of (key + (i + 1) * golden), so the
/// complete state is the pair (key, counter). Streams with different keys
/// never share state; advancing one leaves every other stream untouched.
/// All derived distributions are implemented here rather than through
/// <random> so sequences are identical across standard libraries.
class RngStream {
 public:
  RngStream() = default;

  /// Stream keyed by a run seed and a purpose label ("arrivals", "replay", ...).
  RngStream(std::uint64_t seed, std::string_view purpose);

  static RngStream from_state(std::uint64_t key, std::uint64_t counter) {
    RngStream s;
    s.key_ = key;
    s.counter_ = counter;
    return s;
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Uniform on (0, 1]; safe as a logarithm argument.
  double uniform_positive() noexcept { return 1.0 - uniform(); }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; consumes two draws per sample.
  double normal() noexcept;

  double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }

  /// Unbiased integer in [0, n); n must be positive.
  std::uint64_t index(std::uint64_t n) noexcept;

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace nslice::traffic
