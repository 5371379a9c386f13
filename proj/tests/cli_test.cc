// Copyright 2026 The Imitate Authors.
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

#include <array>
#include <cstdio>
#include <string>

#include <gtest/gtest.h>

#include "imitate/pipeline.h"
#include "imitate/synthetic.h"
#include "test_util.h"

namespace imitate {
namespace {

struct RunResult {
  int code = -1;
  std::string output;
};

RunResult RunCli(const std::string& args) {
  const std::string cmd = std::string(IMITATE_CLI) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.output.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

void WriteGaitKeypoints(const std::filesystem::path& path, std::size_t frames) {
  GaitParams params = GaitParams::Walking();
  params.frames = frames;
  testing::WriteFile(path, SerializeKeypointJson(RenderKeypoints(
                               SyntheticGait(params), SkeletonModel{})));
}

TEST(Cli, HelpListsFlagsAndDefaults) {
  for (const char* sub : {"extract", "smooth", "train", "evaluate", "pipeline"}) {
    const RunResult r = RunCli(std::string(sub) + " --help");
    EXPECT_EQ(r.code, 0) << sub;
    EXPECT_NE(r.output.find("--config"), std::string::npos) << sub;
    EXPECT_NE(r.output.find("--seed"), std::string::npos) << sub;
    EXPECT_NE(r.output.find("--out-dir"), std::string::npos) << sub;
  }
  const RunResult smooth = RunCli("smooth --help");
  EXPECT_NE(smooth.output.find("--sg-window"), std::string::npos);
  EXPECT_NE(smooth.output.find("default 7"), std::string::npos);
  EXPECT_NE(smooth.output.find("--sg-edge"), std::string::npos);
  EXPECT_NE(RunCli("train --help").output.find("--checkpoint-every"),
            std::string::npos);
}

TEST(Cli, NoSubcommandIsUsageError) { EXPECT_EQ(RunCli("").code, 1); }

TEST(Cli, MissingKeypointFileNamesPath) {
  testing::TempDir dir("cli_missing");
  const RunResult r =
      RunCli("extract /nonexistent/kp.json --out-dir " + Q(dir.path()));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("/nonexistent/kp.json"), std::string::npos)
      << r.output;
  EXPECT_NE(r.output.find("extract"), std::string::npos) << r.output;
}

TEST(Cli, ExtractThenSmooth) {
  testing::TempDir dir("cli_extract");
  WriteGaitKeypoints(dir / "kp.json", 20);
  const RunResult ex =
      RunCli("extract " + Q(dir / "kp.json") + " --degrees --out-dir " +
          Q(dir.path()));
  ASSERT_EQ(ex.code, 0) << ex.output;
  const AngleTrajectory angles = ReadAngleCsv(dir / "angles.csv");
  EXPECT_EQ(angles.size(), 20u);

  const RunResult even = RunCli("smooth " + Q(dir / "angles.csv") +
                             " --sg-window 4 --out-dir " + Q(dir.path()));
  EXPECT_EQ(even.code, 1) << even.output;

  ASSERT_EQ(RunCli("smooth " + Q(dir / "angles.csv") + " -o " +
                Q(dir / "default.csv"))
                .code,
            0);
  ASSERT_EQ(RunCli("smooth " + Q(dir / "angles.csv") +
                " --sg-window 7 --sg-order 2 --sg-edge copy -o " +
                Q(dir / "explicit.csv"))
                .code,
            0);
  EXPECT_EQ(testing::ReadFile(dir / "default.csv"),
            testing::ReadFile(dir / "explicit.csv"));
  EXPECT_EQ(RunCli("smooth " + Q(dir / "angles.csv") + " --sg-edge wrap").code, 1);
}

TEST(Cli, SmoothConstantCsvIsIdentity) {
  testing::TempDir dir("cli_const");
  std::string csv =
      "frame,r_shoulder,l_shoulder,r_elbow,l_elbow,r_hip,l_hip,r_knee,l_knee\n";
  for (int t = 0; t < 10; ++t) {
    csv += std::to_string(t) +
           ",1.500000,-2.000000,3.000000,0.000000,4.000000,5.000000,6.000000,"
           "7.000000\n";
  }
  testing::WriteFile(dir / "c.csv", csv);
  ASSERT_EQ(RunCli("smooth " + Q(dir / "c.csv") + " -o " + Q(dir / "s.csv")).code,
            0);
  EXPECT_EQ(testing::ReadFile(dir / "s.csv"), csv);
}

TEST(Cli, SmoothShortChannelNamesJoint) {
  testing::TempDir dir("cli_short");
  std::string csv =
      "frame,r_shoulder,l_shoulder,r_elbow,l_elbow,r_hip,l_hip,r_knee,l_knee\n";
  for (int t = 0; t < 8; ++t) {
    csv += std::to_string(t) + ",1,2,3,4,5,6," + (t < 3 ? "" : "7") + ",8\n";
  }
  testing::WriteFile(dir / "c.csv", csv);
  const RunResult r = RunCli("smooth " + Q(dir / "c.csv") + " -o " +
                          Q(dir / "s.csv"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("r-knee"), std::string::npos) << r.output;
}

TEST(Cli, TrainListsConfigProblems) {
  testing::TempDir dir("cli_cfg");
  testing::WriteFile(dir / "bad.json",
                     R"({"trainer": {"batch_size": 0, "sync_period": 0}})");
  testing::WriteFile(dir / "d.csv", "frame,r_shoulder,l_shoulder,r_elbow,"
                                    "l_elbow,r_hip,l_hip,r_knee,l_knee\n"
                                    "0,0,0,0,0,0,0,0,0\n");
  const RunResult r = RunCli("train " + Q(dir / "d.csv") + " --config " +
                          Q(dir / "bad.json") + " --out-dir " + Q(dir.path()));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("batch_size"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("sync_period"), std::string::npos) << r.output;
}

TEST(Cli, TrainEvaluateRoundTripIsDeterministic) {
  testing::TempDir dir("cli_train");
  WriteGaitKeypoints(dir / "kp.json", 12);
  testing::WriteFile(dir / "cfg.json",
                     R"({"network": {"hidden": [8]},
                         "trainer": {"epochs": 2, "batch_size": 8}})");
  ASSERT_EQ(RunCli("extract " + Q(dir / "kp.json") + " -o " + Q(dir / "a.csv"))
                .code,
            0);
  for (const char* sub : {"t1", "t2"}) {
    const RunResult r =
        RunCli("train " + Q(dir / "a.csv") + " --config " + Q(dir / "cfg.json") +
            " --seed 3 --out-dir " + Q(dir / sub));
    ASSERT_EQ(r.code, 0) << r.output;
  }
  EXPECT_EQ(testing::ReadFile(dir / "t1" / "checkpoint.bin"),
            testing::ReadFile(dir / "t2" / "checkpoint.bin"));
  EXPECT_EQ(testing::ReadFile(dir / "t1" / "training_log.csv"),
            testing::ReadFile(dir / "t2" / "training_log.csv"));

  const RunResult ev =
      RunCli("evaluate " + Q(dir / "t1" / "checkpoint.bin") + " --demo " +
          Q(dir / "a.csv") + " --config " + Q(dir / "cfg.json") +
          " --loss-log " + Q(dir / "t1" / "training_log.csv") +
          " --out-dir " + Q(dir / "report"));
  ASSERT_EQ(ev.code, 0) << ev.output;
  EXPECT_NE(ev.output.find("within"), std::string::npos);
  for (const char* name :
       {"mean_angle_error.csv", "euclidean.csv", "loss_curve.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "report" / name)) << name;
  }

  const RunResult mismatch =
      RunCli("evaluate " + Q(dir / "t1" / "checkpoint.bin") + " --demo " +
          Q(dir / "a.csv") + " --out-dir " + Q(dir / "r2"));
  EXPECT_EQ(mismatch.code, 2) << mismatch.output;
}

TEST(Cli, EpochsZeroCheckpointEqualsInitialization) {
  testing::TempDir dir("cli_zero");
  testing::WriteFile(dir / "d.csv", "frame,r_shoulder,l_shoulder,r_elbow,"
                                    "l_elbow,r_hip,l_hip,r_knee,l_knee\n"
                                    "0,0,0,0,0,0,0,0,0\n1,1,0,0,0,0,0,0,0\n");
  testing::WriteFile(dir / "cfg.json", R"({"network": {"hidden": [8]}})");
  ASSERT_EQ(RunCli("train " + Q(dir / "d.csv") + " --epochs 0 --seed 5 --config " +
                Q(dir / "cfg.json") + " --out-dir " + Q(dir.path()))
                .code,
            0);
  NetworkSpec spec;
  spec.hidden = {8};
  EXPECT_EQ(LoadCheckpoint(dir / "checkpoint.bin").params, InitNetwork(spec, 5));
}

}  // namespace
}  // namespace imitate
