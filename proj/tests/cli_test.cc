// Copyright 2026 The flybelt Authors
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

// End-to-end tests of the command-line tool: exit codes, output files and the
// output-directory override.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "flybelt/csv.hpp"
#include "flybelt/modal_set.hpp"
#include "flybelt/shaper.hpp"

namespace flybelt {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("flybelt_cli_" + std::string(
                                 ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the tool with `args` (and optional environment prefix) and returns
  // its exit code.
  int run(const std::string& args, const std::string& env = "") const {
    const std::string cmd = env + " \"" FLYBELT_CLI_PATH "\" " + args + " > \"" +
                            (dir_ / "stdout.txt").string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    write_file_atomic(p, text);
    return p;
  }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrorsExitWithOne) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("warp"), 1);
  EXPECT_EQ(run("design --sf 1.5"), 1);
  EXPECT_EQ(run("design --ts -0.01"), 1);
  EXPECT_EQ(run("simulate --config /nonexistent/config.json"), 1);
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(CliTest, InvalidModalSetExitsWithOne) {
  const fs::path cfg = write("bad.json", R"({"omega1": 3.55, "omega2": 2.58})");
  EXPECT_EQ(run("design --config " + cfg.string() + " --out " + dir_.string()), 1);
  EXPECT_FALSE(fs::exists(dir_ / "shaper.xml"));
}

TEST_F(CliTest, InvalidScenarioExitsWithOne) {
  const fs::path typo = write("typo.json", R"({"simulaton": {"dt": 0.001}})");
  EXPECT_EQ(run("simulate --config " + typo.string() + " --out " + dir_.string()), 1);
  EXPECT_EQ(run("simulate --strategy warp --out " + dir_.string()), 1);
}

TEST_F(CliTest, UnidentifiableRecordExitsWithTwo) {
  EXPECT_EQ(run("modal --duration 1 --out " + dir_.string()), 2);
}

TEST_F(CliTest, DesignWritesLoadableShaper) {
  const fs::path cfg = write("modes.json", R"({"omega1": 2.58, "omega2": 3.55})");
  ASSERT_EQ(run("design --config " + cfg.string() + " --sf 0.15 --ts 0.01 --out " +
                dir_.string()),
            0);
  const ShaperFir xml = shaper_from_xml(read_file(dir_ / "shaper.xml"));
  const ShaperFir json = shaper_from_json(read_file(dir_ / "shaper.json"));
  EXPECT_EQ(xml.h, json.h);
  EXPECT_EQ(xml.ts, 0.01);
  EXPECT_EQ(int(xml.size()), 474);
  EXPECT_LT(sensitivity(xml, 2.58, 0.0), 1e-8);
  EXPECT_LT(sensitivity(xml, 3.55, 0.0), 1e-8);
}

TEST_F(CliTest, EnvironmentChoosesTheOutputDirectory) {
  const fs::path env_dir = dir_ / "from_env";
  ASSERT_EQ(run("design --sf 0", "FLYBELT_OUT_DIR=\"" + env_dir.string() + "\""), 0);
  EXPECT_TRUE(fs::exists(env_dir / "shaper.xml"));
  // --out wins over the environment.
  const fs::path flag_dir = dir_ / "from_flag";
  ASSERT_EQ(run("design --sf 0 --out " + flag_dir.string(),
                "FLYBELT_OUT_DIR=\"" + env_dir.string() + "_unused\""),
            0);
  EXPECT_TRUE(fs::exists(flag_dir / "shaper.json"));
  EXPECT_FALSE(fs::exists(env_dir.string() + "_unused"));
}

TEST_F(CliTest, SimulateWritesTracesAndReport) {
  const fs::path cfg = write("short.json", R"({"simulation": {"horizon": 6.0}})");
  ASSERT_EQ(run("simulate --config " + cfg.string() + " --strategy polynomial --out " +
                dir_.string()),
            0);
  const auto report = nlohmann::json::parse(read_file(dir_ / "metrics.json"));
  EXPECT_EQ(report["status"], "complete");
  ASSERT_EQ(report["strategies"].size(), 1u);
  EXPECT_EQ(report["strategies"][0]["strategy"], "polynomial");
  const CsvTable trace = read_csv(read_file(dir_ / "polynomial.csv"));
  EXPECT_EQ(trace.rows(), 6001u);
  EXPECT_TRUE(fs::exists(dir_ / "polynomial_command.csv"));
}

TEST_F(CliTest, FailedRunStillWritesAMarkedReport) {
  // The constant-velocity move needs 3 s; a 2 s horizon cannot hold it.
  const fs::path cfg = write("short.json", R"({"simulation": {"horizon": 2.0}})");
  EXPECT_EQ(run("simulate --config " + cfg.string() + " --strategy const-velocity --out " +
                dir_.string()),
            1);
  const auto report = nlohmann::json::parse(read_file(dir_ / "metrics.json"));
  EXPECT_EQ(report["status"], "failed");
  EXPECT_TRUE(report.contains("error"));
}

}  // namespace
}  // namespace flybelt
