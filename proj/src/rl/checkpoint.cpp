// SPDX-License-Identifier: Apache-2.0

#include "nslice/rl/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "nslice/errors.hpp"
#include "nslice/nn/serialization.hpp"

namespace nslice::rl {
namespace {

const nlohmann::json& member(const nlohmann::json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw CheckpointError(std::string("missing field '") + key + "'");
  return doc.at(key);
}

template <typename T>
T value(const nlohmann::json& doc, const char* key) {
  try {
    return member(doc, key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw CheckpointError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

Checkpoint make_checkpoint(const env::ScenarioConfig& scenario, const Td3Agent& agent, std::uint64_t seed,
                           std::uint64_t step, std::uint64_t episode) {
  return {scenario,  agent.config(), agent.state_dim(), agent.action_dim(), seed, step, episode,
          agent.update_count(), agent.params(), agent.streams()};
}

Td3Agent restore_agent(const Checkpoint& cp) {
  return Td3Agent(cp.state_dim, cp.action_dim, cp.config, cp.params, cp.streams, cp.update_count);
}

nlohmann::json to_json(const Checkpoint& cp) {
  const AgentParams& p = cp.params;
  return {{"format", kCheckpointFormat},
          {"version", kCheckpointVersion},
          {"scenario", env::to_json(cp.scenario)},
          {"agent", to_json(cp.config)},
          {"state_dim", cp.state_dim},
          {"action_dim", cp.action_dim},
          {"seed", cp.seed},
          {"step", cp.step},
          {"episode", cp.episode},
          {"update_count", cp.update_count},
          {"networks",
           {{"actor", nn::to_json(p.actor)},
            {"critic1", nn::to_json(p.critic1)},
            {"critic2", nn::to_json(p.critic2)},
            {"actor_target", nn::to_json(p.actor_target)},
            {"critic1_target", nn::to_json(p.critic1_target)},
            {"critic2_target", nn::to_json(p.critic2_target)}}},
          {"optimizers",
           {{"actor", nn::to_json(p.actor_opt)},
            {"critic1", nn::to_json(p.critic1_opt)},
            {"critic2", nn::to_json(p.critic2_opt)}}},
          {"rng",
           {{"exploration", nn::to_json(cp.streams.exploration)},
            {"warmup", nn::to_json(cp.streams.warmup)},
            {"target_noise", nn::to_json(cp.streams.target_noise)},
            {"replay", nn::to_json(cp.streams.replay)}}}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& doc) {
  if (value<std::string>(doc, "format") != kCheckpointFormat) throw CheckpointError("not a checkpoint document");
  const int version = value<int>(doc, "version");
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint cp;
  try {
    cp.scenario = env::scenario_from_json(member(doc, "scenario"));
    cp.config = agent_config_from_json(member(doc, "agent"));
  } catch (const ConfigError& e) {
    throw CheckpointError(std::string("embedded configuration is invalid: ") + e.what());
  }
  cp.state_dim = value<std::size_t>(doc, "state_dim");
  cp.action_dim = value<std::size_t>(doc, "action_dim");
  cp.seed = value<std::uint64_t>(doc, "seed");
  cp.step = value<std::uint64_t>(doc, "step");
  cp.episode = value<std::uint64_t>(doc, "episode");
  cp.update_count = value<std::uint64_t>(doc, "update_count");

  const nlohmann::json& nets = member(doc, "networks");
  AgentParams& p = cp.params;
  p.actor = nn::mlp_from_json(member(nets, "actor"));
  p.critic1 = nn::mlp_from_json(member(nets, "critic1"));
  p.critic2 = nn::mlp_from_json(member(nets, "critic2"));
  p.actor_target = nn::mlp_from_json(member(nets, "actor_target"));
  p.critic1_target = nn::mlp_from_json(member(nets, "critic1_target"));
  p.critic2_target = nn::mlp_from_json(member(nets, "critic2_target"));

  const nlohmann::json& opts = member(doc, "optimizers");
  p.actor_opt = nn::optimizer_from_json(member(opts, "actor"), p.actor);
  p.critic1_opt = nn::optimizer_from_json(member(opts, "critic1"), p.critic1);
  p.critic2_opt = nn::optimizer_from_json(member(opts, "critic2"), p.critic2);

  const nlohmann::json& rng = member(doc, "rng");
  cp.streams.exploration = nn::rng_from_json(member(rng, "exploration"));
  cp.streams.warmup = nn::rng_from_json(member(rng, "warmup"));
  cp.streams.target_noise = nn::rng_from_json(member(rng, "target_noise"));
  cp.streams.replay = nn::rng_from_json(member(rng, "replay"));

  try {
    (void)restore_agent(cp);
  } catch (const ContractError& e) {
    throw CheckpointError(std::string("inconsistent checkpoint: ") + e.what());
  }
  if (cp.state_dim != env::SlicingEnv::kFieldsPerSlice * cp.scenario.slices.size() ||
      cp.action_dim != cp.scenario.slices.size()) {
    throw CheckpointError("checkpoint dimensions do not match its scenario");
  }
  return cp;
}

void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << to_json(cp).dump(1) << '\n';
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move checkpoint into place at " + path.string() + ": " + ec.message());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw CheckpointError(path.string() + " is not valid JSON: " + e.what());
  }
  return checkpoint_from_json(doc);
}

}  // namespace nslice::rl
