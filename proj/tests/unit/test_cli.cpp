// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "nslice/harness/exit_codes.hpp"
#include "temp_dir.hpp"

namespace {

using namespace nslice::harness;
namespace fs = std::filesystem;

int cli(const std::string& args) {
  const std::string cmd = std::string(NSLICE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_tiny_config(const fs::path& path, double qos0 = 20.0) {
  std::ofstream(path) << R"({
  "scenario": {"episode_length": 20,
               "slices": [{"slice_id": 0, "qos_latency": )"
                      << qos0 << R"(}, {"slice_id": 1, "qos_latency": 40.0}]},
  "agent": {"batch_size": 8, "hidden_sizes": [8, 8], "start_timesteps": 10, "max_timesteps": 60},
  "run": {"seeds": [1], "flush_interval": 5}
})";
}

TEST(Cli, HelpAndUsage) {
  EXPECT_EQ(cli("--help"), kOk);
  EXPECT_EQ(cli(""), kUsage);
  EXPECT_EQ(cli("frobnicate"), kUsage);
  EXPECT_EQ(cli("train"), kUsage);
  EXPECT_EQ(cli("train --config x.json --algorithm sac"), kUsage);
}

TEST(Cli, TrainIsDeterministicAndHonoursOverrides) {
  nslice::testing::TempDir dir;
  write_tiny_config(dir / "c.json");
  const std::string cfg = (dir / "c.json").string();
  ASSERT_EQ(cli("train --config " + cfg + " --out " + (dir / "a").string()), kOk);
  ASSERT_EQ(cli("train --config " + cfg + " --out " + (dir / "b").string()), kOk);
  EXPECT_EQ(slurp(dir / "a" / "metrics.csv"), slurp(dir / "b" / "metrics.csv"));
  ASSERT_EQ(cli("train --config " + cfg + " --out " + (dir / "c").string() +
                " --seed 4 --seed 5 --algorithm ddpg --override agent.max_timesteps=30"),
            kOk);
  const auto written = nlohmann::json::parse(slurp(dir / "c" / "config.json"));
  EXPECT_EQ(written["agent"]["algorithm"], "ddpg");
  EXPECT_EQ(written["agent"]["max_timesteps"], 30);
  EXPECT_EQ(written["run"]["seeds"], nlohmann::json::array({4, 5}));
}

TEST(Cli, ConfigErrors) {
  nslice::testing::TempDir dir;
  std::ofstream(dir / "bad.json") << R"({"agent": {"unknown_knob": 1}})";
  EXPECT_EQ(cli("train --config " + (dir / "bad.json").string()), kConfig);
  EXPECT_EQ(cli("train --config " + (dir / "missing.json").string()), kIo);
  write_tiny_config(dir / "c.json");
  EXPECT_EQ(cli("train --config " + (dir / "c.json").string() + " --override agent.tau=-1"), kConfig);
}

TEST(Cli, EvaluateErrorsAndSuccess) {
  nslice::testing::TempDir dir;
  write_tiny_config(dir / "c.json");
  ASSERT_EQ(cli("train --config " + (dir / "c.json").string() + " --out " + (dir / "t").string()), kOk);
  const std::string cp = (dir / "t" / "seed_1" / "checkpoint.json").string();
  EXPECT_EQ(cli("evaluate --checkpoint " + cp + " --episodes 0 --out " + (dir / "e0").string()), kOk);
  EXPECT_EQ(cli("evaluate --checkpoint " + cp + " --episodes 2 --seed 3 --out " + (dir / "e2").string()), kOk);
  std::ofstream(dir / "corrupt.json") << "{\"format\": \"nslice-checkpoint\", \"version\": 1";
  EXPECT_EQ(cli("evaluate --checkpoint " + (dir / "corrupt.json").string() + " --out " + (dir / "x").string()),
            kCheckpoint);
  std::ofstream(dir / "three.json")
      << R"({"scenario": {"max_vnfs": 10, "slices": [{"slice_id": 0}, {"slice_id": 1}, {"slice_id": 2}]}})";
  EXPECT_EQ(cli("evaluate --checkpoint " + cp + " --config " + (dir / "three.json").string() + " --out " +
                (dir / "y").string()),
            kDimensionMismatch);
}

TEST(Cli, CompareAndRender) {
  nslice::testing::TempDir dir;
  write_tiny_config(dir / "one.json");
  write_tiny_config(dir / "two.json");
  write_tiny_config(dir / "other.json", 25.0);
  EXPECT_EQ(cli("compare --config " + (dir / "one.json").string() + " --config " + (dir / "other.json").string() +
                " --out " + (dir / "m").string()),
            kScenarioMismatch);
  ASSERT_EQ(cli("compare --config " + (dir / "one.json").string() + " --config " + (dir / "two.json").string() +
                " --out " + (dir / "cmp").string()),
            kOk);
  EXPECT_TRUE(fs::exists(dir / "cmp" / "compare.md"));
  EXPECT_TRUE(fs::exists(dir / "cmp" / "one" / "metrics.csv"));

  const std::string csv = (dir / "cmp" / "one" / "metrics.csv").string();
  EXPECT_EQ(cli("render --csv " + csv + " --out " + (dir / "r.svg").string() + " --metric energy_j --window 3"),
            kOk);
  EXPECT_TRUE(fs::exists(dir / "r.svg"));
  std::string text = slurp(csv);
  text += "1,2,oops\n";
  std::ofstream(dir / "broken.csv") << text;
  EXPECT_EQ(cli("render --csv " + (dir / "broken.csv").string() + " --out " + (dir / "b.svg").string()), kParse);
}

}  // namespace
