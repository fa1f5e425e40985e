// SPDX-License-Identifier: Apache-2.0

#include "nslice/env/scenario.hpp"

#include <cmath>
#include <set>
#include <string>

#include "nslice/errors.hpp"
#include "nslice/json_fields.hpp"

namespace nslice::env {
namespace {

void require(bool ok, const std::string& field, const char* message) {
  if (!ok) throw ConfigError(field, message);
}

void positive(double v, const std::string& field) { require(std::isfinite(v) && v > 0.0, field, "must be finite and > 0"); }
void non_negative(double v, const std::string& field) { require(std::isfinite(v) && v >= 0.0, field, "must be finite and >= 0"); }

std::vector<SliceSpec> default_slices() {
  SliceSpec urllc;
  urllc.slice_id = 0;
  urllc.qos_latency = 20.0;
  urllc.ue_arrival_rate = 0.5;
  urllc.ue_mean_lifetime = 30.0;
  SliceSpec embb;
  embb.slice_id = 1;
  embb.qos_latency = 40.0;
  embb.ue_arrival_rate = 0.6;
  embb.ue_mean_lifetime = 40.0;
  return {urllc, embb};
}

}  // namespace

ScenarioConfig default_scenario() {
  ScenarioConfig config;
  config.slices = default_slices();
  return config;
}

void validate(const ScenarioConfig& c) {
  require(c.num_cells >= 1, "num_cells", "must be >= 1");
  require(c.num_cpus >= 1, "num_cpus", "must be >= 1");
  positive(c.cpu_capacity, "cpu_capacity");
  require(c.max_vnfs >= 1, "max_vnfs", "must be >= 1");
  positive(c.vnf_capacity, "vnf_capacity");
  positive(c.theta, "theta");
  positive(c.k0, "k0");
  positive(c.mu_star, "mu_star");
  non_negative(c.boot_latency, "boot_latency");
  non_negative(c.vnf_energy, "vnf_energy");
  non_negative(c.sigma_star, "sigma_star");
  require(std::isfinite(c.amp_efficiency) && c.amp_efficiency > 0.0 && c.amp_efficiency <= 1.0, "amp_efficiency",
          "must lie in (0, 1]");
  require(!c.slices.empty(), "slices", "at least one slice is required");
  std::set<int> ids;
  for (std::size_t i = 0; i < c.slices.size(); ++i) {
    const SliceSpec& s = c.slices[i];
    const std::string p = "slices." + std::to_string(i) + ".";
    require(ids.insert(s.slice_id).second, p + "slice_id", "duplicate slice id");
    require(s.slice_id >= 0, p + "slice_id", "must be >= 0");
    non_negative(s.arrival_rate_mean, p + "arrival_rate_mean");
    non_negative(s.ue_arrival_rate, p + "ue_arrival_rate");
    non_negative(s.ue_mean_lifetime, p + "ue_mean_lifetime");
    positive(s.qos_latency, p + "qos_latency");
    non_negative(s.bandwidth, p + "bandwidth");
    non_negative(s.tx_power, p + "tx_power");
  }
  positive(c.weights.computation, "weights.0");
  positive(c.weights.latency, "weights.1");
  positive(c.weights.energy, "weights.2");
  double split = 0.0;
  for (std::size_t i = 0; i < c.cpu_split.size(); ++i) {
    non_negative(c.cpu_split[i], "cpu_split." + std::to_string(i));
    split += c.cpu_split[i];
  }
  require(std::abs(split - 1.0) <= 1e-12, "cpu_split", "fractions must sum to 1");
  require(c.episode_length >= 1, "episode_length", "must be >= 1");
  positive(c.latency_cap, "latency_cap");
  non_negative(c.qos_penalty, "qos_penalty");
  non_negative(c.saturation_penalty, "saturation_penalty");
  positive(c.reward_epsilon, "reward_epsilon");
  positive(c.sinr_min, "sinr_min");
  require(std::isfinite(c.sinr_max) && c.sinr_max >= c.sinr_min, "sinr_max", "must be finite and >= sinr_min");
  positive(c.max_ues, "max_ues");
  positive(c.energy_cap, "energy_cap");
  require(c.max_vnfs * c.vnf_capacity <= c.total_capacity(), "max_vnfs",
          "max_vnfs * vnf_capacity exceeds num_cpus * cpu_capacity");
}

ScenarioConfig scenario_from_json(const nlohmann::json& doc) {
  ScenarioConfig c = default_scenario();
  JsonFields f(doc, "scenario");
  f.read("num_cells", c.num_cells);
  f.read("num_cpus", c.num_cpus);
  f.read("cpu_capacity", c.cpu_capacity);
  f.read("max_vnfs", c.max_vnfs);
  f.read("vnf_capacity", c.vnf_capacity);
  f.read("theta", c.theta);
  f.read("k0", c.k0);
  f.read("mu_star", c.mu_star);
  f.read("boot_latency", c.boot_latency);
  f.read("vnf_energy", c.vnf_energy);
  f.read("sigma_star", c.sigma_star);
  f.read("amp_efficiency", c.amp_efficiency);
  if (f.has("slices")) {
    const nlohmann::json& arr = f.claim("slices");
    if (!arr.is_array()) throw ConfigError("scenario.slices", "expected an array");
    c.slices.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      SliceSpec s;
      s.slice_id = static_cast<int>(i);
      JsonFields sf(arr[i], "scenario.slices." + std::to_string(i));
      sf.read("slice_id", s.slice_id);
      sf.read("arrival_rate_mean", s.arrival_rate_mean);
      sf.read("ue_arrival_rate", s.ue_arrival_rate);
      sf.read("ue_mean_lifetime", s.ue_mean_lifetime);
      sf.read("qos_latency", s.qos_latency);
      sf.read("bandwidth", s.bandwidth);
      sf.read("tx_power", s.tx_power);
      sf.finish();
      c.slices.push_back(s);
    }
  }
  if (f.has("weights")) {
    const auto w = JsonFields::convert<std::vector<double>>(f.claim("weights"), "scenario.weights");
    if (w.size() != 3) throw ConfigError("scenario.weights", "expected three weights");
    c.weights = {w[0], w[1], w[2]};
  }
  if (f.has("cpu_split")) {
    const auto s = JsonFields::convert<std::vector<double>>(f.claim("cpu_split"), "scenario.cpu_split");
    if (s.size() != 3) throw ConfigError("scenario.cpu_split", "expected three fractions");
    c.cpu_split = {s[0], s[1], s[2]};
  }
  f.read("episode_length", c.episode_length);
  f.read("latency_cap", c.latency_cap);
  f.read("qos_penalty", c.qos_penalty);
  f.read("saturation_penalty", c.saturation_penalty);
  f.read("reward_epsilon", c.reward_epsilon);
  f.read("sinr_min", c.sinr_min);
  f.read("sinr_max", c.sinr_max);
  f.read("max_ues", c.max_ues);
  f.read("energy_cap", c.energy_cap);
  f.finish();
  try {
    validate(c);
  } catch (const ConfigError& e) {
    throw ConfigError("scenario." + e.field(), e.message());
  }
  return c;
}

nlohmann::json to_json(const ScenarioConfig& c) {
  nlohmann::json slices = nlohmann::json::array();
  for (const SliceSpec& s : c.slices) {
    slices.push_back({{"slice_id", s.slice_id},
                      {"arrival_rate_mean", s.arrival_rate_mean},
                      {"ue_arrival_rate", s.ue_arrival_rate},
                      {"ue_mean_lifetime", s.ue_mean_lifetime},
                      {"qos_latency", s.qos_latency},
                      {"bandwidth", s.bandwidth},
                      {"tx_power", s.tx_power}});
  }
  return {{"num_cells", c.num_cells},
          {"num_cpus", c.num_cpus},
          {"cpu_capacity", c.cpu_capacity},
          {"max_vnfs", c.max_vnfs},
          {"vnf_capacity", c.vnf_capacity},
          {"theta", c.theta},
          {"k0", c.k0},
          {"mu_star", c.mu_star},
          {"boot_latency", c.boot_latency},
          {"vnf_energy", c.vnf_energy},
          {"sigma_star", c.sigma_star},
          {"amp_efficiency", c.amp_efficiency},
          {"slices", slices},
          {"weights", {c.weights.computation, c.weights.latency, c.weights.energy}},
          {"cpu_split", {c.cpu_split[0], c.cpu_split[1], c.cpu_split[2]}},
          {"episode_length", c.episode_length},
          {"latency_cap", c.latency_cap},
          {"qos_penalty", c.qos_penalty},
          {"saturation_penalty", c.saturation_penalty},
          {"reward_epsilon", c.reward_epsilon},
          {"sinr_min", c.sinr_min},
          {"sinr_max", c.sinr_max},
          {"max_ues", c.max_ues},
          {"energy_cap", c.energy_cap}};
}

}  // namespace nslice::env
