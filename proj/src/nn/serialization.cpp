// SPDX-License-Identifier: Apache-2.0

#include "nslice/nn/serialization.hpp"

#include <cmath>
#include <string>

#include "nslice/errors.hpp"

namespace nslice::nn {
namespace {

std::vector<double> read_doubles(const nlohmann::json& doc, const char* key, std::size_t expected) {
  if (!doc.contains(key) || !doc.at(key).is_array()) throw CheckpointError(std::string("missing array '") + key + "'");
  const nlohmann::json& arr = doc.at(key);
  if (arr.size() != expected) {
    throw CheckpointError(std::string("array '") + key + "' has " + std::to_string(arr.size()) + " entries, expected " +
                          std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const nlohmann::json& v : arr) {
    if (!v.is_number()) throw CheckpointError(std::string("non-numeric entry in '") + key + "'");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw CheckpointError(std::string("non-finite entry in '") + key + "'");
    out.push_back(x);
  }
  return out;
}

template <typename T>
T read_value(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw CheckpointError(std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw CheckpointError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

nlohmann::json to_json(const Mlp& net) {
  nlohmann::json activations = nlohmann::json::array();
  for (const Activation a : net.activations()) activations.push_back(std::string(to_string(a)));
  const std::span<const double> p = net.parameters();
  return {{"sizes", net.sizes()},
          {"activations", activations},
          {"parameters", std::vector<double>(p.begin(), p.end())}};
}

Mlp mlp_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw CheckpointError("network entry is not an object");
  const auto sizes = read_value<std::vector<std::size_t>>(doc, "sizes");
  const auto names = read_value<std::vector<std::string>>(doc, "activations");
  std::vector<Activation> activations;
  try {
    for (const std::string& n : names) activations.push_back(activation_from_string(n));
    Mlp net(sizes, activations);
    const std::vector<double> params = read_doubles(doc, "parameters", net.parameter_count());
    std::copy(params.begin(), params.end(), net.parameters().begin());
    return net;
  } catch (const ContractError& e) {
    throw CheckpointError(std::string("invalid network architecture: ") + e.what());
  }
}

nlohmann::json to_json(const AdamState& s) {
  return {{"kind", std::string(to_string(s.kind))},
          {"learning_rate", s.learning_rate},
          {"beta1", s.beta1},
          {"beta2", s.beta2},
          {"epsilon", s.epsilon},
          {"step", s.step},
          {"first_moment", s.first_moment},
          {"second_moment", s.second_moment}};
}

AdamState optimizer_from_json(const nlohmann::json& doc, const Mlp& net) {
  if (!doc.is_object()) throw CheckpointError("optimizer entry is not an object");
  AdamState s;
  try {
    s.kind = optimizer_from_string(read_value<std::string>(doc, "kind"));
  } catch (const ContractError& e) {
    throw CheckpointError(e.what());
  }
  s.learning_rate = read_value<double>(doc, "learning_rate");
  s.beta1 = read_value<double>(doc, "beta1");
  s.beta2 = read_value<double>(doc, "beta2");
  s.epsilon = read_value<double>(doc, "epsilon");
  s.step = read_value<std::uint64_t>(doc, "step");
  s.first_moment = read_doubles(doc, "first_moment", net.parameter_count());
  s.second_moment = read_doubles(doc, "second_moment", net.parameter_count());
  return s;
}

nlohmann::json to_json(const traffic::RngStream& rng) { return {{"key", rng.key()}, {"counter", rng.counter()}}; }

traffic::RngStream rng_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw CheckpointError("rng entry is not an object");
  return traffic::RngStream::from_state(read_value<std::uint64_t>(doc, "key"), read_value<std::uint64_t>(doc, "counter"));
}

}  // namespace nslice::nn
