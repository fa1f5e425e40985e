// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "nslice/env/scenario.hpp"
#include "nslice/traffic/rng.hpp"

namespace nslice::traffic {

/// One connected user equipment.
struct Ue {
  std::uint64_t ue_id = 0;
  int slice_id = 0;
  double lambda = 0.0;   // packet arrival rate per step
  double sinr = 0.0;     // linear
  double rate = 0.0;     // wireless service rate, bandwidth * log2(1 + sinr)
  double tx_power = 0.0;
  int remaining_lifetime = 0;

  friend bool operator==(const Ue&, const Ue&) = default;
};

/// Independent streams for each stochastic concern of the workload.
struct TrafficStreams {
  RngStream arrivals;
  RngStream sinr;
  RngStream lifetimes;

  static TrafficStreams derive(std::uint64_t seed) {
    return {RngStream(seed, "arrivals"), RngStream(seed, "sinr"), RngStream(seed, "lifetimes")};
  }
};

struct SinrRange {
  double min = 1.0;
  double max = 15.0;
};

/// Poisson count by Knuth's product-of-uniforms method. Means above 30 are
/// split into chunks (a sum of independent Poissons is Poisson) so exp(-mean)
/// never underflows. Throws DomainError for negative or non-finite means.
int sample_poisson(double mean, RngStream& rng);

/// Geometric count on {1, 2, ...} with the given mean, by inversion.
/// Means at or below one always yield 1.
int sample_geometric(double mean, RngStream& rng);

/// Log-uniform on [range.min, range.max]; exactly range.min when the bounds coincide.
double sample_sinr(SinrRange range, RngStream& rng);

double transmission_rate(double bandwidth, double sinr);

/// New UEs requesting this slice during one step.
std::vector<Ue> spawn_ues(const env::SliceSpec& spec, SinrRange sinr, TrafficStreams& streams,
                          std::uint64_t& next_ue_id);

struct LifetimeAdvance {
  std::vector<Ue> surviving;
  std::vector<Ue> departed;
};

/// Decrements every lifetime; UEs that reach zero depart. Order is preserved.
LifetimeAdvance advance_lifetimes(std::vector<Ue> ues);

}  // namespace nslice::traffic
