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


// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails or overruns its time budget.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.h"
#include "imitate/angles.h"
#include "imitate/dqn.h"
#include "imitate/env.h"
#include "imitate/error.h"
#include "imitate/metrics.h"
#include "imitate/network.h"
#include "imitate/pipeline.h"
#include "imitate/savgol.h"
#include "mdp_fit.h"
#include "oracles.h"
#include "test_util.h"

namespace fs = std::filesystem;

namespace imitate {
namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Num(double v, int precision = 3) {
  std::ostringstream out;
  out.precision(precision);
  out << v;
  return out.str();
}

// Runs the command line tool with `args`, output captured to `log`.
int RunCli(const std::string& args, const fs::path& log) {
  const std::string command = std::string("\"") + IMITATE_CLI + "\" " + args +
                              " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path DataDir() { return fs::path(IMITATE_DATA_DIR); }

Outcome SavitzkyGolay() {
  double max_gap = 0.0;
  for (int window : {5, 7}) {
    const SgFilterSpec spec = SgCoefficients(window, 2, EdgeMode::kCopy);
    const auto exact = oracle::ExactSgRow(window, 2);
    for (std::size_t i = 0; i < exact.size(); ++i) {
      max_gap = std::max(
          max_gap, std::abs(spec.coefficients()[i] - oracle::ToDouble(exact[i])));
    }
  }
  double max_poly = 0.0;
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int window : {5, 7}) {
    for (EdgeMode edge : {EdgeMode::kCopy, EdgeMode::kMirror}) {
      const SgFilterSpec spec = SgCoefficients(window, 2, edge);
      for (int degree = 0; degree <= 2; ++degree) {
        for (int trial = 0; trial < 20; ++trial) {
          const double c0 = u(rng), c1 = degree >= 1 ? u(rng) : 0.0,
                       c2 = degree >= 2 ? 0.05 * u(rng) : 0.0;
          std::vector<double> signal(60);
          for (std::size_t t = 0; t < signal.size(); ++t) {
            const double x = static_cast<double>(t);
            signal[t] = c0 + c1 * x + c2 * x * x;
          }
          const std::vector<double> out = SgApply(signal, spec);
          const std::size_t h = static_cast<std::size_t>(spec.half_window());
          const std::size_t lo = edge == EdgeMode::kMirror && degree > 0 ? h : 0;
          for (std::size_t t = lo; t + lo < signal.size(); ++t) {
            max_poly = std::max(max_poly, std::abs(out[t] - signal[t]));
          }
        }
      }
    }
  }
  return {max_gap < 1e-9 && max_poly < 1e-9,
          "max coefficient gap " + Num(max_gap) + ", max polynomial residual " +
              Num(max_poly)};
}

Vec2 Rotate(const Vec2& p, const Vec2& about, double phi) {
  const Vec2 d = p - about;
  return about + Vec2(std::cos(phi) * d.x() - std::sin(phi) * d.y(),
                      std::sin(phi) * d.x() + std::cos(phi) * d.y());
}

Outcome AngleOracle() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_real_distribution<double> s(0.1, 10.0);
  int triples = 0, slope_checked = 0;
  double slope_gap = 0.0, invariance_gap = 0.0;
  while (triples < 100000) {
    const Vec2 p1(u(rng), u(rng)), p2(u(rng), u(rng)), p3(u(rng), u(rng));
    if ((p1 - p2).norm() < 1e-3 || (p3 - p2).norm() < 1e-3) continue;
    ++triples;
    const double base = ThreePointAngle(p1, p2, p3);
    const bool slope_defined =
        std::abs(p2.x() - p1.x()) >= 0.05 && std::abs(p3.x() - p2.x()) >= 0.05 &&
        std::abs(1.0 + ((p2.y() - p1.y()) / (p2.x() - p1.x())) *
                           ((p3.y() - p2.y()) / (p3.x() - p2.x()))) >= 1e-3;
    if (slope_defined) {
      const double slope = oracle::SlopeAngle(p1.x(), p1.y(), p2.x(), p2.y(),
                                              p3.x(), p3.y());
      slope_gap = std::max(slope_gap, oracle::WrappedGap(base, slope, kPi));
      ++slope_checked;
    }
    const Vec2 t(u(rng), u(rng));
    const double k = s(rng);
    const double phi = u(rng);
    for (double moved : {ThreePointAngle(p1 + t, p2 + t, p3 + t),
                         ThreePointAngle(k * p1, k * p2, k * p3),
                         ThreePointAngle(Rotate(p1, p2, phi), p2,
                                         Rotate(p3, p2, phi))}) {
      invariance_gap =
          std::max(invariance_gap, oracle::WrappedGap(moved, base, 2 * kPi));
    }
  }
  return {slope_gap < 1e-9 && invariance_gap < 1e-9,
          std::to_string(triples) + " triples, " + std::to_string(slope_checked) +
              " with slopes defined; max slope gap " + Num(slope_gap) +
              ", max invariance gap " + Num(invariance_gap)};
}

Outcome GradientCheck() {
  std::mt19937_64 rng(303);
  int configs = 0;
  double worst = 0.0;
  for (Activation act : {Activation::kRelu, Activation::kTanh}) {
    for (Variant var : {Variant::kDense, Variant::kConv1dFront}) {
      for (int i = 0; i < 30; ++i) {
        const NetworkSpec spec = testing::RandomSpec(rng, act, var);
        const NetworkParams p(
            spec, 0, testing::RandomVector(rng, spec.ParameterCount(), 0.7));
        const auto r = testing::CheckGradients(
            p, testing::RandomVector(rng, spec.input_dim),
            testing::RandomVector(rng, spec.output_dim));
        worst = std::max(worst, r.max_relative_error);
        ++configs;
      }
    }
  }
  return {configs >= 100 && worst < 1e-4,
          std::to_string(configs) + " configurations, max relative error " +
              Num(worst)};
}

Outcome TdOracle() {
  const oracle::TwoStateMdp mdp = oracle::ExampleMdp();
  const auto expected = oracle::ValueIteration(mdp);
  const auto fitted = testing::FitTdFixedPoint(mdp);
  double gap = 0.0;
  for (int s = 0; s < 2; ++s) {
    for (int a = 0; a < 2; ++a) {
      gap = std::max(gap, std::abs(fitted[s][a] - expected[s][a]));
    }
  }
  return {gap < 1e-6, "max |Q - Q*| " + Num(gap)};
}

Outcome ToyRun() {
  const PipelineConfig cfg = LoadPipelineConfig(DataDir() / "toy" / "config.json");
  const AngleTrajectory demo =
      ReadAngleCsv(DataDir() / "toy" / "demo.csv", cfg.ingest.frame_rate);
  const ImitationEnv env(cfg.env, demo);
  TrainerConfig trainer = cfg.trainer;
  trainer.seed = cfg.seed;

  std::set<int> updated_epochs;
  int current_epoch = 0;
  TrainHooks hooks;
  hooks.on_update = [&](const UpdateInfo&) { updated_epochs.insert(current_epoch); };
  hooks.on_epoch = [&](const EpochLog& e, const NetworkParams&, const AdamState&) {
    current_epoch = e.epoch + 1;
  };
  const TrainResult result = Train(env, cfg.network, trainer, hooks);
  const RolloutResult rollout = GreedyRollout(result.params, env);

  std::vector<double> mse;
  for (const EpochLog& e : result.log) {
    if (updated_epochs.count(e.epoch)) mse.push_back(e.mse);
  }
  constexpr std::size_t kWindow = 50;
  std::size_t windows = 0, rising = 0;
  for (std::size_t i = 0; i + kWindow <= mse.size(); ++i) {
    ++windows;
    if (mse[i + kWindow - 1] > mse[i]) ++rising;
  }
  const double rising_fraction =
      windows > 0 ? static_cast<double>(rising) / static_cast<double>(windows) : 1.0;
  const bool error_ok = rollout.last_error() < 0.1 * rollout.first_error();
  const bool loss_ok = windows > 0 && rising_fraction <= 0.05;
  return {error_ok && loss_ok,
          "E_first " + Num(rollout.first_error(), 4) + " rad, E_last " +
              Num(rollout.last_error(), 4) + " rad (" +
              (error_ok ? "ok" : "above 0.1 E_first") + "); mse rises across " +
              std::to_string(rising) + " of " + std::to_string(windows) +
              " 50-epoch windows (" + Num(100.0 * rising_fraction) +
              "%, limit 5%)"};
}

AngleTrajectory RandomDemo(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-3.5, 3.5);
  const std::size_t frames = 1 + rng() % 40;
  std::vector<AngleFrame> out(frames);
  for (AngleFrame& f : out) {
    for (int j = 0; j < kJointCount; ++j) {
      f.angles[j] = angle(rng);
      f.valid[j] = rng() % 10 != 0;
    }
  }
  return AngleTrajectory(std::move(out), 30.0);
}

Outcome LimitsFuzz() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  long long states = 0, outside = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    EnvConfig cfg;
    cfg.step_size = DegToRad(0.5 + 44.5 * unit(rng));
    cfg.reset_pose = rng() % 2 ? ResetPose::kDemo : ResetPose::kZero;
    cfg.reset_noise = DegToRad(30.0 * unit(rng));
    cfg.active_joints.clear();
    for (int j = 0; j < kJointCount; ++j) {
      if (rng() % 2) cfg.active_joints.push_back(static_cast<Joint>(j));
    }
    if (cfg.active_joints.empty()) cfg.active_joints.push_back(Joint::kLKnee);
    const ImitationEnv env(cfg, RandomDemo(rng));
    EnvState state = env.Reset(rng());
    ++states;
    if (!cfg.limits.Contains(state.angles)) ++outside;
    bool terminal = false;
    while (!terminal) {
      const int action = static_cast<int>(
          rng() % static_cast<std::uint64_t>(env.action_count()));
      const StepResult r = env.Step(state, action);
      ++states;
      if (!cfg.limits.Contains(r.state.angles)) ++outside;
      terminal = r.terminal;
      state = r.state;
    }
  }
  return {outside == 0, "10000 sequences, " + std::to_string(states) +
                            " states, " + std::to_string(outside) +
                            " outside the limits"};
}

AngleTrajectory FromDegrees(const std::vector<JointAngles>& rows) {
  std::vector<AngleFrame> frames(rows.size());
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (int j = 0; j < kJointCount; ++j) {
      frames[t].angles[j] = DegToRad(rows[t][j]);
      frames[t].valid[j] = true;
    }
  }
  return AngleTrajectory(std::move(frames), 30.0);
}

std::string FirstLine(const fs::path& path) {
  const std::string text = testing::ReadFile(path);
  return text.substr(0, text.find('\n'));
}

Outcome MetricsIdentities() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(-60.0, 60.0);
  std::vector<JointAngles> rows(25);
  for (JointAngles& r : rows) {
    for (double& v : r) v = u(rng);
  }
  const AngleTrajectory a = FromDegrees(rows);
  bool zero = true;
  for (int g = 0; g < kJointGroupCount; ++g) {
    const auto group = static_cast<JointGroup>(g);
    zero = zero && MeanAngleError(a, a, group).value == 0.0 &&
           GroupEuclidean(a, a, group).value == 0.0;
  }
  for (double v : RmsErrorSeries(a, a)) zero = zero && v == 0.0;

  const auto idx = [](Joint j) { return static_cast<int>(j); };
  JointAngles pred{}, input{};
  pred[idx(Joint::kLShoulder)] = 10;
  pred[idx(Joint::kRShoulder)] = 20;
  input[idx(Joint::kLShoulder)] = 15;
  input[idx(Joint::kRShoulder)] = 25;
  const double mae = MeanAngleError(FromDegrees({pred}), FromDegrees({input}),
                                    JointGroup::kShoulder)
                         .value;
  const std::vector<double> p = {0, 3}, q = {4, 0};
  const double dist = EuclideanDistance(p, q);
  JointAngles three_four{}, origin{};
  three_four[0] = 3;
  three_four[1] = 4;
  const double rms =
      RmsErrorSeries(FromDegrees({three_four}), FromDegrees({origin}))[0];
  const bool examples = std::abs(mae - 5.0) < 1e-9 && std::abs(dist - 5.0) < 1e-9 &&
                        std::abs(rms - std::sqrt(25.0 / 8.0)) < 1e-9 &&
                        std::abs(rms - 1.7678) < 1e-4;

  const std::string golden =
      "case,F.Shoulder,F.Elbow,F.Thigh,F.Knee,C.Shoulder,C.Elbow,C.Thigh,C.Knee";
  testing::TempDir dir("acceptance_report");
  ComparisonReport report;
  report.case_name = "golden";
  report.original = a;
  report.dense = ComputeMetrics(a, a);
  report.conv = ComputeMetrics(a, a);
  EmitReport(report, dir.path());
  bool header = true;
  for (const char* name : {"mean_angle_error.csv", "euclidean.csv"}) {
    const std::string text = testing::ReadFile(dir / name);
    header = header &&
             text == golden + "\ngolden,0.000000,0.000000,0.000000,0.000000,"
                              "0.000000,0.000000,0.000000,0.000000\n";
  }
  return {zero && examples && header,
          std::string("identities ") + (zero ? "zero" : "NOT zero") +
              "; examples " + Num(mae, 10) + ", " + Num(dist, 10) + ", " +
              Num(rms, 10) + "; golden tables " + (header ? "match" : "DIFFER")};
}

std::map<std::string, std::string> ReadTree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel = fs::relative(entry.path(), root).string();
    if (rel == "cli.log") continue;
    files[rel] = testing::ReadFile(entry.path());
  }
  return files;
}

Outcome Determinism() {
  testing::TempDir dir("acceptance_determinism");
  const std::string common =
      "pipeline --config \"" + (DataDir() / "walk" / "config.json").string() +
      "\" --epochs 50 --checkpoint-every 10 \"" +
      (DataDir() / "walk" / "keypoints.json").string() + "\" --out-dir ";
  std::map<std::string, std::string> runs[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path out = dir / ("run" + std::to_string(i));
    fs::create_directories(out);
    const int code = RunCli(common + "\"" + out.string() + "\"", out / "cli.log");
    if (code != 0) {
      return {false, "pipeline run " + std::to_string(i) + " exited " +
                         std::to_string(code) + ": " +
                         testing::ReadFile(out / "cli.log")};
    }
    runs[i] = ReadTree(out);
  }
  std::size_t differing = 0;
  std::set<std::string> names;
  for (const auto& [name, bytes] : runs[0]) names.insert(name);
  for (const auto& [name, bytes] : runs[1]) names.insert(name);
  for (const std::string& name : names) {
    const auto a = runs[0].find(name), b = runs[1].find(name);
    if (a == runs[0].end() || b == runs[1].end() || a->second != b->second) {
      ++differing;
    }
  }
  const bool has_checkpoint = runs[0].count("checkpoint.bin") &&
                              runs[0].count("training_log.csv") &&
                              runs[0].count("checkpoint_epoch_50.bin");
  return {differing == 0 && has_checkpoint,
          std::to_string(names.size()) + " files compared, " +
              std::to_string(differing) + " differ"};
}

std::vector<double> DenseJointDistances(const fs::path& csv) {
  std::istringstream in(testing::ReadFile(csv));
  std::string line;
  std::getline(in, line);
  std::vector<double> out;
  while (std::getline(in, line)) {
    const std::size_t first = line.find(',');
    const std::size_t second = line.find(',', first + 1);
    out.push_back(std::stod(line.substr(first + 1, second - first - 1)));
  }
  return out;
}

Outcome WalkingDemo() {
  testing::TempDir dir("acceptance_walk");
  const std::string common =
      "pipeline --config \"" + (DataDir() / "walk" / "config.json").string() +
      "\" \"" + (DataDir() / "walk" / "keypoints.json").string() + "\" ";
  const fs::path trained = dir / "trained", untrained = dir / "untrained";
  fs::create_directories(trained);
  fs::create_directories(untrained);
  const int a = RunCli(common + "--out-dir \"" + trained.string() + "\"",
                       dir / "trained.log");
  const int b = RunCli(common + "--epochs 0 --out-dir \"" + untrained.string() + "\"",
                       dir / "untrained.log");
  if (a != 0 || b != 0) {
    return {false, "pipeline exited " + std::to_string(a) + "/" + std::to_string(b) +
                       ": " + testing::ReadFile(dir / "trained.log") +
                       testing::ReadFile(dir / "untrained.log")};
  }
  const std::vector<double> t = DenseJointDistances(trained / "report" / "joint_euclidean.csv");
  const std::vector<double> u =
      DenseJointDistances(untrained / "report" / "joint_euclidean.csv");
  if (t.size() != kJointCount || u.size() != kJointCount) {
    return {false, "joint table has the wrong number of rows"};
  }
  int improved = 0;
  double worst = 0.0;
  std::string per_joint;
  for (int j = 0; j < kJointCount; ++j) {
    const double ratio = t[j] / u[j];
    worst = std::max(worst, ratio);
    if (2.0 * t[j] <= u[j]) ++improved;
    per_joint += std::string(j ? " " : "") +
                 std::string(JointName(static_cast<Joint>(j))) + "=" + Num(ratio, 2);
  }
  return {improved == kJointCount,
          std::to_string(improved) + "/8 joints at least halved, worst ratio " +
              Num(worst, 3) + " [" + per_joint + "]"};
}

struct Criterion {
  int id;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace imitate

int main() {
  using imitate::Criterion;
  const std::vector<Criterion> criteria = {
      {1, 1.0, imitate::SavitzkyGolay},   {2, 5.0, imitate::AngleOracle},
      {3, 30.0, imitate::GradientCheck},  {4, 5.0, imitate::TdOracle},
      {5, 120.0, imitate::ToyRun},        {6, 30.0, imitate::LimitsFuzz},
      {7, 1.0, imitate::MetricsIdentities}, {8, 180.0, imitate::Determinism},
      {9, 600.0, imitate::WalkingDemo},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    imitate::Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.budget_seconds;
    const bool pass = outcome.pass && in_time;
    if (!pass) ++failures;
    std::printf("criterion %d: %s %s; %.2f s (budget %.0f s%s)\n", c.id,
                pass ? "PASS" : "FAIL", outcome.detail.c_str(), seconds,
                c.budget_seconds, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
