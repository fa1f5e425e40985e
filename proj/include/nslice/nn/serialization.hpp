// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "nslice/nn/mlp.hpp"
#include "nslice/nn/optimizer.hpp"
#include "nslice/traffic/rng.hpp"

namespace nslice::nn {

/// {"sizes": [...], "activations": [...], "parameters": [...]} with the flat
/// parameters in layer order (weights input-major, then bias). Doubles are
/// written in shortest round-trip decimal form.
nlohmann::json to_json(const Mlp& net);
/// Throws CheckpointError for malformed documents.
Mlp mlp_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const AdamState& state);
AdamState optimizer_from_json(const nlohmann::json& doc, const Mlp& net);

nlohmann::json to_json(const traffic::RngStream& rng);
traffic::RngStream rng_from_json(const nlohmann::json& doc);

}  // namespace nslice::nn
