// Copyright 2026 The Corridor Planner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "corridor/scenario.h"
#include "test_util.h"

namespace corridor {
namespace {

using nlohmann::json;

// Runs the tool with stdout and stderr captured to files in `dir`.
int RunCli(const test::TempDir& dir, const std::string& args) {
  const std::string command = std::string("'") + CORRIDOR_CLI_PATH + "' " +
                              args + " >'" + (dir / "stdout").string() +
                              "' 2>'" + (dir / "stderr").string() + "'";
  const int rc = std::system(command.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string Quote(const std::filesystem::path& p) {
  return "'" + p.string() + "'";
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    config_ = test::SourceDir() / "configs" / "desk.json";
    ASSERT_EQ(RunCli(dir_, "scene-gen --config " + Quote(config_) + " --out " +
                            Quote(dir_ / "scene.json")),
              0)
        << test::ReadBytes(dir_ / "stderr");
  }

  std::string Scene() const { return Quote(dir_ / "scene.json"); }

  test::TempDir dir_;
  std::filesystem::path config_;
};

TEST_F(CliTest, SceneGenWritesScene) {
  const json scene = ReadJsonFile(dir_ / "scene.json");
  EXPECT_EQ(scene["sites"].size(), 16u);
}

TEST_F(CliTest, FullPipeline) {
  ASSERT_EQ(RunCli(dir_, "ckm-build --config " + Quote(config_) + " --scene " +
                          Scene() + " --out-dir " + Quote(dir_ / "ckm")),
            0)
      << test::ReadBytes(dir_ / "stderr");
  EXPECT_TRUE(std::filesystem::exists(dir_ / "ckm" / "manifest.json"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "ckm" / "site_015.ckm"));

  ASSERT_EQ(RunCli(dir_, "plan --config " + Quote(config_) + " --scene " +
                          Scene() + " --ckm-dir " + Quote(dir_ / "ckm") +
                          " --method joint --out " + Quote(dir_ / "b.json")),
            0)
      << test::ReadBytes(dir_ / "stderr");
  const std::string out = test::ReadBytes(dir_ / "stdout");
  EXPECT_NE(out.find("method=joint status=feasible"), std::string::npos)
      << out;
  const json bundle = ReadJsonFile(dir_ / "b.json");
  EXPECT_TRUE(bundle["verification"]["ok"].get<bool>());

  // Without a channel map directory the maps are built in memory.
  ASSERT_EQ(RunCli(dir_, "plan --config " + Quote(config_) + " --scene " +
                          Scene() + " --method joint --out " +
                          Quote(dir_ / "b2.json")),
            0);
  EXPECT_EQ(test::ReadBytes(dir_ / "b.json"),
            test::ReadBytes(dir_ / "b2.json"));

  ASSERT_EQ(RunCli(dir_, "export --bundle " + Quote(dir_ / "b.json") +
                          " --what sinr-heatmap --out " +
                          Quote(dir_ / "sinr.csv")),
            0);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "sinr.pgm"));
  ASSERT_EQ(RunCli(dir_, "export --bundle " + Quote(dir_ / "b.json") +
                          " --what corridor-csv --out " +
                          Quote(dir_ / "corridor.csv")),
            0);
}

TEST_F(CliTest, InfeasiblePlanExitsTwo) {
  json config = ReadJsonFile(config_);
  config["radio"]["sense_threshold_dbm"] = -40;
  WriteJsonFile(config, dir_ / "hard.json");
  EXPECT_EQ(RunCli(dir_, "plan --config " + Quote(dir_ / "hard.json") +
                          " --scene " + Scene() + " --method astar --out " +
                          Quote(dir_ / "b.json")),
            2);
  const json bundle = ReadJsonFile(dir_ / "b.json");
  EXPECT_EQ(bundle["plan"]["status"], "infeasible");
}

TEST_F(CliTest, DumpMpsAndExternalSolver) {
  ASSERT_EQ(RunCli(dir_, "plan --config " + Quote(config_) + " --scene " +
                          Scene() + " --method astar --out " +
                          Quote(dir_ / "b.json") + " --dump-mps " +
                          Quote(dir_ / "mps")),
            0)
      << test::ReadBytes(dir_ / "stderr");
  EXPECT_TRUE(std::filesystem::exists(dir_ / "mps" / "p3_2.mps"));
  ASSERT_EQ(RunCli(dir_, "plan --config " + Quote(config_) + " --scene " +
                          Scene() + " --method astar --out " +
                          Quote(dir_ / "ext.json") + " --external-solver " +
                          Quote(CORRIDOR_FAKE_SOLVER_PATH)),
            0)
      << test::ReadBytes(dir_ / "stderr");
  EXPECT_EQ(ReadJsonFile(dir_ / "b.json")["plan"]["bs_count"],
            ReadJsonFile(dir_ / "ext.json")["plan"]["bs_count"]);
}

TEST_F(CliTest, Sweep) {
  ASSERT_EQ(RunCli(dir_, "sweep --config " + Quote(config_) + " --scene " +
                          Scene() +
                          " --param eps2 --values=3,6 --methods astar,random"
                          " --out " +
                          Quote(dir_ / "sweep.csv")),
            0)
      << test::ReadBytes(dir_ / "stderr");
  const std::string csv = test::ReadBytes(dir_ / "sweep.csv");
  EXPECT_EQ(csv.rfind("eps2_db,method,status,", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(RunCli(dir_, ""), 1);
  EXPECT_EQ(RunCli(dir_, "plan --config " + Quote(config_)), 1);
  EXPECT_EQ(RunCli(dir_, "plan --config " + Quote(config_) + " --scene " +
                          Scene() + " --method greedy --out " +
                          Quote(dir_ / "b.json")),
            1);
  EXPECT_EQ(RunCli(dir_, "scene-gen --config " + Quote(dir_ / "missing.json") +
                          " --out " + Quote(dir_ / "x.json")),
            1);
  json bad = ReadJsonFile(config_);
  bad["scene"].erase("bounds");
  WriteJsonFile(bad, dir_ / "bad.json");
  EXPECT_EQ(RunCli(dir_, "scene-gen --config " + Quote(dir_ / "bad.json") +
                          " --out " + Quote(dir_ / "x.json")),
            1);
  EXPECT_NE(test::ReadBytes(dir_ / "stderr").find("error: scene.bounds"),
            std::string::npos)
      << test::ReadBytes(dir_ / "stderr");
  EXPECT_EQ(RunCli(dir_, "--help"), 0);
}

}  // namespace
}  // namespace corridor
