// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset, e.g. `acceptance 1 2 3`.

#include <boost/math/distributions/chi_squared.hpp>
#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <thread>
#include <vector>

#include "fixtures.hpp"
#include "gradcheck.hpp"
#include "nslice/env/cost_model.hpp"
#include "nslice/env/slicing_env.hpp"
#include "nslice/harness/commands.hpp"
#include "nslice/harness/run_config.hpp"
#include "nslice/nn/optimizer.hpp"
#include "nslice/rl/td3_agent.hpp"

namespace {

using namespace nslice;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Pinned tolerances and budgets.
constexpr double kGradTolerance = 1e-4;
constexpr double kGradStep = 1e-5;
constexpr std::size_t kGradNetworks = 100;
constexpr double kGradBudgetSeconds = 10.0;
constexpr double kOracleTolerance = 1e-12;
constexpr std::size_t kOracleDraws = 1000;
constexpr double kOracleBudgetSeconds = 1.0;
constexpr double kPropertyBudgetSeconds = 1.0;
constexpr double kViolationMargin = 0.05;
constexpr double kTrainingBudgetSeconds = 15.0 * 60.0;
constexpr double kActorOptimum = 0.3;
constexpr double kActorTolerance = 0.01;
constexpr std::size_t kActorMaxUpdates = 2000;
constexpr double kActorBudgetSeconds = 5.0;
constexpr std::size_t kFuzzSteps = 100000;
constexpr std::size_t kReplaySize = 1000;
constexpr std::size_t kReplayDraws = 100000;
constexpr double kReplayMinP = 0.01;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double rel_err(double got, double want) {
  if (got == want) return 0.0;
  return std::abs(got - want) / std::max(std::abs(want), std::numeric_limits<double>::min());
}

// 1. Backward pass against central finite differences.
Outcome gradient_fidelity() {
  const auto start = Clock::now();
  traffic::RngStream rng(2024, "acceptance.gradients");
  double worst = 0.0;
  std::size_t checked = 0, skipped = 0, relu_nets = 0, tanh_nets = 0;
  for (std::size_t n = 0; n < kGradNetworks; ++n) {
    const nn::Mlp net = nslice::testing::random_network(rng, {16, 64, 64, 4});
    for (const auto& layer : net.layers()) {
      relu_nets += layer.activation == nn::Activation::relu;
      tanh_nets += layer.activation == nn::Activation::tanh;
    }
    const std::size_t batch = 1 + rng.index(3);
    const auto x = nslice::testing::random_matrix(rng, batch, net.input_size());
    const auto up = nslice::testing::random_matrix(rng, batch, net.output_size());
    const auto r = nslice::testing::check_gradients(net, x, up, kGradStep);
    worst = std::max(worst, r.max_relative_error);
    checked += r.checked;
    skipped += r.skipped_kinks;
  }
  const double elapsed = seconds_since(start);
  return {worst < kGradTolerance && elapsed < kGradBudgetSeconds && relu_nets > 0 && tanh_nets > 0,
          fmt::format("max rel err {:.3e} (< {:.0e}) over {} coordinates of {} networks, {} kink-crossing "
                      "probes excluded; {:.2f} s (< {:.0f} s)",
                      worst, kGradTolerance, checked, kGradNetworks, skipped, elapsed, kGradBudgetSeconds)};
}

// 2. Cost formulas against a direct re-derivation.
namespace oracle {

double computation(const std::vector<double>& sinr, double k0, double theta) {
  double k = 0.0;
  for (const double d : sinr) k += theta * std::log(1.0 + d) / std::log(2.0);
  return k + static_cast<double>(sinr.size()) * k0;
}

double latency(int j, double omega, double mu, const std::vector<env::UeQueue>& ues, double boot) {
  double l = static_cast<double>(j) * boot;
  const double processing = static_cast<double>(j) / (static_cast<double>(j) * mu - omega);
  for (const auto& ue : ues) l += processing + 1.0 / (ue.rate - ue.lambda);
  return l;
}

double energy(const std::vector<double>& loads, int j, const std::vector<double>& tx, double sigma, double rho,
              double psi) {
  double e = static_cast<double>(j) * psi;
  for (const double p : loads) e += sigma * p * p * p;
  for (const double p : tx) e += p / rho;
  return e;
}

double network_cost(double k, double l, double e, double w1, double w2, double w3, int m) {
  return (w1 * k + w2 * l + w3 * e) / static_cast<double>(m > 0 ? m : 1);
}

}  // namespace oracle

Outcome cost_oracle() {
  const auto start = Clock::now();
  traffic::RngStream rng(7, "acceptance.oracle");
  double worst_k = 0.0, worst_l = 0.0, worst_e = 0.0, worst_n = 0.0;
  for (std::size_t draw = 0; draw < kOracleDraws; ++draw) {
    const std::size_t m = rng.index(25);
    std::vector<double> sinr(m), tx(m);
    std::vector<env::UeQueue> ues(m);
    double omega = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sinr[i] = rng.uniform(0.0, 30.0);
      tx[i] = rng.uniform(0.0, 2.0);
      ues[i].lambda = rng.uniform(0.0, 3.0);
      ues[i].rate = ues[i].lambda + rng.uniform(0.05, 10.0);
      omega += ues[i].lambda;
    }
    const int j = 1 + static_cast<int>(rng.index(16));
    // Stable draw: j * mu strictly above the offered load.
    const double mu = (omega + rng.uniform(0.05, 20.0)) / j;
    const double k0 = rng.uniform(0.0, 50.0), theta = rng.uniform(0.0, 20.0);
    const double boot = rng.uniform(0.0, 5.0);
    std::vector<double> loads(rng.index(8));
    for (double& p : loads) p = rng.uniform(0.0, 2e9);
    const double sigma = rng.uniform(1e-27, 1e-25), rho = rng.uniform(0.05, 1.0), psi = rng.uniform(0.0, 5.0);
    const double w1 = rng.uniform(0.0, 2.0), w2 = rng.uniform(0.0, 2.0), w3 = rng.uniform(0.0, 2.0);

    const double k = env::computation_cost(sinr, k0, theta);
    const double l = env::network_latency(j, omega, mu, ues, boot, std::numeric_limits<double>::infinity());
    const double e = env::network_energy(loads, j, tx, sigma, rho, psi);
    const double n = env::total_network_cost(k, l, e, {w1, w2, w3}, static_cast<int>(m));
    worst_k = std::max(worst_k, rel_err(k, oracle::computation(sinr, k0, theta)));
    worst_l = std::max(worst_l, rel_err(l, oracle::latency(j, omega, mu, ues, boot)));
    worst_e = std::max(worst_e, rel_err(e, oracle::energy(loads, j, tx, sigma, rho, psi)));
    worst_n = std::max(worst_n, rel_err(n, oracle::network_cost(k, l, e, w1, w2, w3, static_cast<int>(m))));
  }
  const double elapsed = seconds_since(start);
  const double worst = std::max({worst_k, worst_l, worst_e, worst_n});
  return {worst < kOracleTolerance && elapsed < kOracleBudgetSeconds,
          fmt::format("max rel err computation {:.2e}, latency {:.2e}, energy {:.2e}, cost {:.2e} (< {:.0e}) "
                      "over {} draws; {:.3f} s (< {:.0f} s)",
                      worst_k, worst_l, worst_e, worst_n, kOracleTolerance, kOracleDraws, elapsed,
                      kOracleBudgetSeconds)};
}

// 3. TD target min-bound, Polyak identity/copy, smoothing clip boundaries.
Outcome target_properties() {
  const auto start = Clock::now();
  std::vector<std::string> failures;
  traffic::RngStream rng(3, "acceptance.properties");
  for (int i = 0; i < 100000; ++i) {
    const double r = rng.uniform(-5, 5), g = rng.uniform(), q1 = rng.uniform(-50, 50), q2 = rng.uniform(-50, 50);
    const bool done = rng.uniform() < 0.2;
    const double twin = rl::td_target(r, g, done, q1, q2);
    if (!(twin <= rl::td_target(r, g, done, q1) && twin <= rl::td_target(r, g, done, q2))) {
      failures.push_back("min-bound");
      break;
    }
  }
  for (int i = 0; i < 20; ++i) {
    const nn::Mlp online = nslice::testing::random_network(rng, {12, 64, 64, 2});
    nn::Mlp target = online;
    for (double& p : target.parameters()) p = rng.normal();
    const nn::Mlp before = target;
    nn::polyak_update(target, online, 0.0);
    if (!(target == before)) failures.push_back("tau=0 identity");
    nn::polyak_update(target, online, 1.0);
    if (!(target == online)) failures.push_back("tau=1 copy");
  }
  if (rl::smoothed_action(0.0, 0.9, 0.5, -1.0, 1.0) != 0.5) failures.push_back("noise clip +c");
  if (rl::smoothed_action(0.0, -0.9, 0.5, -1.0, 1.0) != -0.5) failures.push_back("noise clip -c");
  if (rl::smoothed_action(0.8, 0.5, 0.5, -1.0, 1.0) != 1.0) failures.push_back("action clamp high");
  if (rl::smoothed_action(-0.8, -0.5, 0.5, -1.0, 1.0) != -1.0) failures.push_back("action clamp low");
  if (rl::smoothed_action(0.2, 0.3, 0.5, -1.0, 1.0) != 0.5) failures.push_back("interior");
  if (rl::td_target(0.5, 0.99, false, 2.0, 1.0) != 0.5 + 0.99 * 1.0) failures.push_back("td example");
  if (rl::td_target(0.5, 0.99, true, 2.0, 1.0) != 0.5) failures.push_back("terminal mask");
  const double elapsed = seconds_since(start);
  std::string detail = failures.empty() ? "all exact" : "failed:";
  for (const auto& f : failures) detail += " " + f;
  return {failures.empty() && elapsed < kPropertyBudgetSeconds,
          fmt::format("{}; {:.3f} s (< {:.0f} s)", detail, elapsed, kPropertyBudgetSeconds)};
}

// 4 and 5 share one comparison run of the shipped desk profiles.
struct DeskComparison {
  bool ran = false;
  std::string error;
  double seconds = 0.0;
  harness::CompareRow td3;
  harness::CompareRow ddpg;
};

DeskComparison& desk_comparison() {
  static DeskComparison result = [] {
    DeskComparison c;
    const auto start = Clock::now();
    try {
      const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
      harness::RunConfig td3 = harness::load_run_config(fs::path(NSLICE_CONFIG_DIR) / "desk.json");
      harness::RunConfig ddpg = harness::load_run_config(fs::path(NSLICE_CONFIG_DIR) / "desk_ddpg.json");
      td3.workers = ddpg.workers = workers;
      const fs::path out = fs::path(NSLICE_ACCEPTANCE_OUT) / "desk_compare";
      std::ostringstream log;
      const auto rows = harness::compare({{"td3", td3}, {"ddpg", ddpg}}, out, log);
      for (const auto& row : rows) (row.label == "td3" ? c.td3 : c.ddpg) = row;
      c.ran = true;
    } catch (const std::exception& e) {
      c.error = e.what();
    }
    c.seconds = seconds_since(start);
    return c;
  }();
  return result;
}

Outcome return_ordering() {
  const DeskComparison& c = desk_comparison();
  if (!c.ran) return {false, "comparison run failed: " + c.error};
  const double td3 = c.td3.final_return.median, ddpg = c.ddpg.final_return.median;
  return {td3 >= ddpg,
          fmt::format("median final-20% episodic return TD3 {:.3f} vs DDPG {:.3f} over 5 seeds x 50k steps; "
                      "training {:.0f} s (target < {:.0f} s)",
                      td3, ddpg, c.seconds, kTrainingBudgetSeconds)};
}

Outcome violation_noninferiority() {
  const DeskComparison& c = desk_comparison();
  if (!c.ran) return {false, "comparison run failed: " + c.error};
  bool pass = c.td3.slice_violation_rate.size() == c.ddpg.slice_violation_rate.size() &&
              !c.td3.slice_violation_rate.empty();
  std::string detail;
  for (std::size_t s = 0; s < c.td3.slice_violation_rate.size() && s < c.ddpg.slice_violation_rate.size(); ++s) {
    const double t = c.td3.slice_violation_rate[s].median, d = c.ddpg.slice_violation_rate[s].median;
    pass = pass && t <= d + kViolationMargin;
    detail += fmt::format("{}slice {}: TD3 {:.4f} vs DDPG {:.4f} (+{:.2f} allowed)", detail.empty() ? "" : "; ", s,
                          t, d, kViolationMargin);
  }
  return {pass, "median final-20% violation rate, " + detail};
}

// 6. Quadratic-critic fixture.
Outcome actor_sanity() {
  const auto start = Clock::now();
  const auto r = nslice::testing::run_quadratic_actor(kActorOptimum, kActorTolerance, kActorMaxUpdates);
  const double elapsed = seconds_since(start);
  return {r.converged && r.worst_error <= kActorTolerance && elapsed < kActorBudgetSeconds,
          fmt::format("within +-{} of {} after {} updates (<= {}), final worst error {:.2e}; {:.2f} s (< {:.0f} s)",
                      kActorTolerance, kActorOptimum, r.converged ? std::to_string(r.updates) : "no",
                      kActorMaxUpdates, r.worst_error, elapsed, kActorBudgetSeconds)};
}

// 7. Two CLI train invocations give byte-identical metrics.
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path root = fs::path(NSLICE_ACCEPTANCE_OUT) / "determinism";
  fs::remove_all(root);
  const std::string base = std::string(NSLICE_CLI_PATH) + " train --config " +
                           (fs::path(NSLICE_CONFIG_DIR) / "desk.json").string() +
                           " --seed 11 --override agent.max_timesteps=3000 --out ";
  int codes[2];
  for (int i = 0; i < 2; ++i) {
    const std::string cmd = base + (root / std::to_string(i)).string() + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    codes[i] = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  if (codes[0] != 0 || codes[1] != 0) {
    return {false, fmt::format("train exited with {} and {}", codes[0], codes[1])};
  }
  const std::string a = slurp(root / "0" / "metrics.csv"), b = slurp(root / "1" / "metrics.csv");
  return {!a.empty() && a == b,
          fmt::format("two runs of 3000 steps (2000 past warm-up): {} bytes vs {} bytes, {}", a.size(), b.size(),
                      a == b ? "identical" : "different")};
}

// 8. Fuzzing random scenarios and actions.
Outcome saturation_safety() {
  traffic::RngStream rng(8, "acceptance.fuzz");
  std::size_t steps = 0, saturated = 0, bad = 0, penalty_mismatch = 0;
  std::uint64_t episode = 0;
  while (steps < kFuzzSteps) {
    env::ScenarioConfig cfg = env::default_scenario();
    cfg.episode_length = 100;
    cfg.mu_star = rng.uniform(0.5, 6.0);
    cfg.saturation_penalty = rng.uniform(0.5, 3.0);
    cfg.qos_penalty = rng.uniform(0.5, 3.0);
    for (auto& s : cfg.slices) {
      s.ue_arrival_rate = rng.uniform(0.0, 8.0);
      s.arrival_rate_mean = rng.uniform(0.1, 3.0);
      s.bandwidth = rng.uniform(0.3, 3.0);
    }
    env::SlicingEnv env(cfg);
    env.reset(++episode);
    bool done = false;
    while (!done && steps < kFuzzSteps) {
      std::vector<double> action(env.action_size());
      for (double& a : action) a = rng.uniform(-1.5, 1.5);
      const env::StepResult r = env.step(action);
      ++steps;
      done = r.done;
      const auto& info = r.info;
      bool finite = std::isfinite(r.reward) && std::isfinite(info.cost) && std::isfinite(info.latency) &&
                    std::isfinite(info.energy);
      bool any_saturated = false;
      for (const auto& s : info.slices) {
        finite = finite && std::isfinite(s.latency) && std::isfinite(s.energy);
        any_saturated = any_saturated || s.saturated;
      }
      for (const double o : r.observation) finite = finite && std::isfinite(o);
      bad += !finite;
      saturated += any_saturated;
      const double unpenalised = 1.0 / (info.cost + cfg.reward_epsilon) -
                                 cfg.qos_penalty * static_cast<double>(info.violated_slices);
      const double charged = unpenalised - r.reward;
      const double expected = any_saturated ? cfg.saturation_penalty : 0.0;
      if (std::abs(charged - expected) > 1e-9 * (1.0 + std::abs(unpenalised)) || info.saturated != any_saturated) {
        ++penalty_mismatch;
      }
    }
  }
  return {bad == 0 && penalty_mismatch == 0 && saturated > 0,
          fmt::format("{} steps, {} non-finite, {} saturated steps, {} with a penalty other than exactly one", steps,
                      bad, saturated, penalty_mismatch)};
}

// 9. Replay sampling uniformity.
Outcome replay_uniformity() {
  rl::ReplayBuffer buffer(kReplaySize, 1, 1);
  for (std::size_t i = 0; i < kReplaySize; ++i) {
    buffer.push(std::vector<double>{static_cast<double>(i)}, std::vector<double>{0.0}, 0.0,
                std::vector<double>{0.0}, false);
  }
  traffic::RngStream rng(9, "acceptance.replay");
  std::vector<double> counts(kReplaySize, 0.0);
  rl::Batch batch;
  std::size_t taken = 0;
  while (taken < kReplayDraws) {
    buffer.sample(std::min<std::size_t>(128, kReplayDraws - taken), rng, batch);
    for (const std::size_t i : batch.indices) counts[i] += 1.0;
    taken += batch.size();
  }
  const double expected = static_cast<double>(kReplayDraws) / kReplaySize;
  double chi2 = 0.0;
  for (const double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  const double p =
      boost::math::cdf(boost::math::complement(boost::math::chi_squared(static_cast<double>(kReplaySize - 1)), chi2));
  return {p > kReplayMinP, fmt::format("chi-square {:.1f} on {} dof, p = {:.4f} (> {})", chi2, kReplaySize - 1, p,
                                       kReplayMinP)};
}

// 10. Delayed actor updates.
Outcome delayed_updates() {
  rl::AgentConfig cfg;
  cfg.policy_freq = 2;
  cfg.batch_size = 16;
  cfg.hidden_sizes = {16, 16};
  const rl::ReplayBuffer buffer = nslice::testing::random_buffer(128, 12, 2, 10);
  std::size_t mismatches = 0, checkpoints = 0;
  for (const std::uint64_t seed : {1u, 2u, 3u}) {
    rl::Td3Agent agent(12, 2, cfg, seed);
    for (std::uint64_t t = 1; t <= 301; ++t) {
      agent.update(buffer);
      ++checkpoints;
      mismatches += agent.params().actor_opt.step != t / 2;
    }
  }
  return {mismatches == 0,
          fmt::format("actor optimiser counter equals floor(T/2) at {} of {} checkpoints (T = 1..301, 3 agents)",
                      checkpoints - mismatches, checkpoints)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "gradient fidelity", gradient_fidelity},
      {2, "cost-model oracle", cost_oracle},
      {3, "target/polyak/smoothing properties", target_properties},
      {4, "TD3 >= DDPG final return", return_ordering},
      {5, "QoS violation non-inferiority", violation_noninferiority},
      {6, "actor-update sanity", actor_sanity},
      {7, "training determinism", determinism},
      {8, "queue-saturation safety", saturation_safety},
      {9, "replay uniformity", replay_uniformity},
      {10, "delayed-update count", delayed_updates},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  fs::create_directories(NSLICE_ACCEPTANCE_OUT);

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    fmt::print("[{}] criterion {:>2} {}: {}\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
