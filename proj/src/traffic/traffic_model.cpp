// SPDX-License-Identifier: Apache-2.0

#include "nslice/traffic/traffic_model.hpp"

#include <cmath>

#include "nslice/errors.hpp"

namespace nslice::traffic {
namespace {

constexpr double kPoissonChunk = 30.0;

int poisson_knuth(double mean, RngStream& rng) {
  const double limit = std::exp(-mean);
  int k = 0;
  double product = rng.uniform_positive();
  while (product > limit) {
    ++k;
    product *= rng.uniform_positive();
  }
  return k;
}

}  // namespace

int sample_poisson(double mean, RngStream& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw DomainError("poisson mean must be finite and non-negative");
  }
  if (mean == 0.0) return 0;
  int total = 0;
  double remaining = mean;
  while (remaining > kPoissonChunk) {
    total += poisson_knuth(kPoissonChunk, rng);
    remaining -= kPoissonChunk;
  }
  return total + poisson_knuth(remaining, rng);
}

int sample_geometric(double mean, RngStream& rng) {
  if (!(mean > 1.0)) return 1;
  const double p = 1.0 / mean;
  const double k = std::ceil(std::log(rng.uniform_positive()) / std::log1p(-p));
  return k < 1.0 ? 1 : static_cast<int>(k);
}

double sample_sinr(SinrRange range, RngStream& rng) {
  const double u = rng.uniform();
  if (range.max == range.min) return range.min;
  const double lo = std::log(range.min);
  const double hi = std::log(range.max);
  return std::exp(lo + u * (hi - lo));
}

double transmission_rate(double bandwidth, double sinr) { return bandwidth * std::log2(1.0 + sinr); }

std::vector<Ue> spawn_ues(const env::SliceSpec& spec, SinrRange sinr, TrafficStreams& streams,
                          std::uint64_t& next_ue_id) {
  const int count = sample_poisson(spec.ue_arrival_rate, streams.arrivals);
  std::vector<Ue> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Ue ue;
    ue.ue_id = next_ue_id++;
    ue.slice_id = spec.slice_id;
    ue.lambda = spec.arrival_rate_mean;
    ue.sinr = sample_sinr(sinr, streams.sinr);
    ue.rate = transmission_rate(spec.bandwidth, ue.sinr);
    ue.tx_power = spec.tx_power;
    ue.remaining_lifetime = sample_geometric(spec.ue_mean_lifetime, streams.lifetimes);
    out.push_back(ue);
  }
  return out;
}

LifetimeAdvance advance_lifetimes(std::vector<Ue> ues) {
  LifetimeAdvance out;
  out.surviving.reserve(ues.size());
  for (Ue& ue : ues) {
    --ue.remaining_lifetime;
    if (ue.remaining_lifetime <= 0) {
      out.departed.push_back(ue);
    } else {
      out.surviving.push_back(ue);
    }
  }
  return out;
}

}  // namespace nslice::traffic
