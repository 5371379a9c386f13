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

// Command-line driver: extract, smooth, train, evaluate, or all four.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "imitate/error.h"
#include "imitate/pipeline.h"

namespace fs = std::filesystem;
using namespace imitate;

namespace {

enum ExitCode { kOk = 0, kUsageExit = 1, kDataExit = 2, kNumericExit = 3 };

int ExitFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return kUsageExit;
    case ErrorKind::kData: return kDataExit;
    case ErrorKind::kNumeric: return kNumericExit;
  }
  return kDataExit;
}

// Flags shared by every subcommand, plus the overrides each may set.
struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";

  std::string input;
  std::string output;
  std::vector<std::string> checkpoints;
  std::string demo;
  std::string loss_log;

  std::optional<int> max_gap;
  std::optional<double> confidence_threshold;
  std::optional<double> frame_rate;
  bool degrees = true;

  std::optional<int> sg_window;
  std::optional<int> sg_order;
  std::optional<std::string> sg_edge;

  std::optional<int> epochs;
  std::optional<int> checkpoint_every;
  std::string env_file;
};

void AddGlobal(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path,
                  "JSON pipeline config; flags override its values");
  cmd->add_option("--seed", o.seed, "top-level random seed (default: config, 0)");
  cmd->add_option("--out-dir", o.out_dir, "output directory")
      ->capture_default_str();
}

void AddExtractFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--max-gap", o.max_gap,
                  "longest interior run of missing frames to interpolate (default 5)");
  cmd->add_option("--confidence-threshold", o.confidence_threshold,
                  "keypoints below this confidence are missing (default 0.05)");
  cmd->add_option("--frame-rate", o.frame_rate,
                  "frame rate when the input has none (default 30)");
  cmd->add_flag("--degrees", o.degrees,
                "write angles in degrees (the default and only unit)");
}

void AddSmoothFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--sg-window", o.sg_window,
                  "Savitzky-Golay window, odd and >= 3 (default 7)");
  cmd->add_option("--sg-order", o.sg_order,
                  "Savitzky-Golay polynomial order, < window (default 2)");
  cmd->add_option("--sg-edge", o.sg_edge, "edge handling: copy|mirror (default copy)")
      ->check(CLI::IsMember({"copy", "mirror"}));
}

void AddTrainFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--epochs", o.epochs, "training episodes (default 500)");
  cmd->add_option("--checkpoint-every", o.checkpoint_every,
                  "also write a checkpoint every N epochs; 0 disables (default 0)");
  cmd->add_option("--env", o.env_file, "skeleton + joint limits JSON file");
}

PipelineConfig ResolveConfig(const Options& o) {
  PipelineConfig cfg;
  if (!o.config_path.empty()) cfg = LoadPipelineConfig(o.config_path);
  if (!o.env_file.empty()) {
    std::ifstream in(o.env_file, std::ios::binary);
    if (!in) ThrowData("cannot open env file: " + o.env_file);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    cfg.env = ParseEnvFile(buffer.str(), cfg.env);
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.max_gap) cfg.ingest.max_gap = *o.max_gap;
  if (o.confidence_threshold) cfg.ingest.confidence_threshold = *o.confidence_threshold;
  if (o.frame_rate) cfg.ingest.frame_rate = *o.frame_rate;
  if (o.sg_window) cfg.smoothing.window = *o.sg_window;
  if (o.sg_order) cfg.smoothing.order = *o.sg_order;
  if (o.sg_edge) cfg.smoothing.edge = ParseEdgeMode(*o.sg_edge);
  if (o.epochs) cfg.trainer.epochs = *o.epochs;
  if (o.checkpoint_every) cfg.checkpoint_every = *o.checkpoint_every;
  cfg.trainer.seed = cfg.seed;
  cfg.Validate();
  return cfg;
}

fs::path OutputPath(const Options& o, const char* default_name) {
  if (!o.output.empty()) return o.output;
  fs::create_directories(o.out_dir);
  return fs::path(o.out_dir) / default_name;
}

// Runs one stage, prefixing any failure with the stage name.
template <typename Fn>
auto Stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(name) + ": " + e.what());
  } catch (const fs::filesystem_error& e) {
    throw Error(ErrorKind::kData, std::string(name) + ": " + e.what());
  }
}

AngleTrajectory ReadDemo(const std::string& path, const PipelineConfig& cfg) {
  return ReadAngleCsv(path, cfg.ingest.frame_rate);
}

void WriteConfigCopy(const PipelineConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream out(dir / "config.json", std::ios::binary);
  out << SerializePipelineConfig(cfg);
}

int CmdExtract(const Options& o) {
  const PipelineConfig cfg = Stage("config", [&] { return ResolveConfig(o); });
  const AngleTrajectory angles =
      Stage("extract", [&] { return RunExtract(o.input, cfg); });
  const fs::path out = OutputPath(o, "angles.csv");
  Stage("extract", [&] {
    WriteAngleCsv(out, angles);
    return 0;
  });
  std::cout << "wrote " << angles.size() << " frames to " << out.string() << "\n";
  return kOk;
}

int CmdSmooth(const Options& o) {
  const PipelineConfig cfg = Stage("config", [&] { return ResolveConfig(o); });
  const AngleTrajectory raw = Stage("smooth", [&] { return ReadDemo(o.input, cfg); });
  const AngleTrajectory smoothed = Stage("smooth", [&] { return RunSmooth(raw, cfg); });
  const fs::path out = OutputPath(o, "smoothed.csv");
  Stage("smooth", [&] {
    WriteAngleCsv(out, smoothed);
    return 0;
  });
  std::cout << "wrote " << smoothed.size() << " frames to " << out.string() << "\n";
  return kOk;
}

int CmdTrain(const Options& o) {
  const PipelineConfig cfg = Stage("config", [&] { return ResolveConfig(o); });
  const AngleTrajectory demo = Stage("train", [&] { return ReadDemo(o.input, cfg); });
  WriteConfigCopy(cfg, o.out_dir);
  const TrainArtifacts a = Stage("train", [&] { return RunTrain(demo, cfg, o.out_dir); });
  std::cout << "trained " << a.result.log.size() << " epochs; checkpoint "
            << a.checkpoint.string() << ", log " << a.log.string() << "\n";
  return kOk;
}

int CmdEvaluate(const Options& o) {
  const PipelineConfig cfg = Stage("config", [&] { return ResolveConfig(o); });
  const AngleTrajectory demo = Stage("evaluate", [&] { return ReadDemo(o.demo, cfg); });
  std::vector<EpochLog> loss;
  if (!o.loss_log.empty()) {
    loss = Stage("evaluate", [&] {
      std::ifstream in(o.loss_log, std::ios::binary);
      if (!in) ThrowData("cannot open training log: " + o.loss_log);
      std::ostringstream buffer;
      buffer << in.rdbuf();
      return ParseTrainingLog(buffer.str());
    });
  }
  std::vector<fs::path> checkpoints(o.checkpoints.begin(), o.checkpoints.end());
  const ComparisonReport report = Stage(
      "evaluate", [&] { return RunEvaluate(checkpoints, demo, cfg, o.out_dir, loss); });
  bool limits_ok = true;
  for (const auto* tag : {&report.dense, &report.conv}) {
    if (*tag) limits_ok = limits_ok && (*tag)->within_limits;
  }
  std::cout << "report written to " << o.out_dir << "; rollout "
            << (limits_ok ? "stays within" : "VIOLATES") << " joint limits\n";
  return limits_ok ? kOk : kNumericExit;
}

int CmdPipeline(const Options& o) {
  const PipelineConfig cfg = Stage("config", [&] { return ResolveConfig(o); });
  const fs::path dir = o.out_dir;
  WriteConfigCopy(cfg, dir);
  const AngleTrajectory angles =
      Stage("extract", [&] { return RunExtract(o.input, cfg); });
  Stage("extract", [&] {
    WriteAngleCsv(dir / "angles.csv", angles);
    return 0;
  });
  const AngleTrajectory smoothed = Stage("smooth", [&] { return RunSmooth(angles, cfg); });
  Stage("smooth", [&] {
    WriteAngleCsv(dir / "smoothed.csv", smoothed);
    return 0;
  });
  // Train and evaluate on the demo as written to disk, so a rerun of the later
  // stages from smoothed.csv sees identical inputs.
  const AngleTrajectory demo =
      Stage("smooth", [&] { return ReadDemo((dir / "smoothed.csv").string(), cfg); });
  const TrainArtifacts a = Stage("train", [&] { return RunTrain(demo, cfg, dir); });
  const ComparisonReport report = Stage("evaluate", [&] {
    return RunEvaluate({a.checkpoint}, demo, cfg, dir / "report", a.result.log);
  });
  std::cout << "pipeline finished: " << angles.size() << " frames, "
            << a.result.log.size() << " epochs, report in "
            << (dir / "report").string() << "\n";
  return report.dense && !report.dense->within_limits ? kNumericExit : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Imitation learning from 2D pose keypoints"};
  app.require_subcommand(1);
  Options o;

  auto* extract = app.add_subcommand("extract", "keypoint file -> joint-angle CSV");
  AddGlobal(extract, o);
  AddExtractFlags(extract, o);
  extract->add_option("keypoints", o.input, "keypoint JSON file or directory")->required();
  extract->add_option("-o,--output", o.output, "angle CSV (default <out-dir>/angles.csv)");

  auto* smooth = app.add_subcommand("smooth", "angle CSV -> smoothed angle CSV");
  AddGlobal(smooth, o);
  AddSmoothFlags(smooth, o);
  smooth->add_option("angles", o.input, "angle CSV")->required();
  smooth->add_option("-o,--output", o.output,
                     "smoothed CSV (default <out-dir>/smoothed.csv)");

  auto* train = app.add_subcommand("train", "smoothed angle CSV -> checkpoint + log");
  AddGlobal(train, o);
  AddTrainFlags(train, o);
  train->add_option("demo", o.input, "smoothed angle CSV")->required();

  auto* evaluate =
      app.add_subcommand("evaluate", "checkpoint(s) + demo CSV -> report files");
  AddGlobal(evaluate, o);
  evaluate->add_option("--env", o.env_file, "skeleton + joint limits JSON file");
  evaluate->add_option("checkpoints", o.checkpoints,
                       "one checkpoint per network variant")->required();
  evaluate->add_option("--demo", o.demo, "demonstration angle CSV")->required();
  evaluate->add_option("--loss-log", o.loss_log,
                       "training_log.csv to copy into loss_curve.csv");

  auto* pipeline = app.add_subcommand("pipeline", "extract, smooth, train, evaluate");
  AddGlobal(pipeline, o);
  AddExtractFlags(pipeline, o);
  AddSmoothFlags(pipeline, o);
  AddTrainFlags(pipeline, o);
  pipeline->add_option("keypoints", o.input, "keypoint JSON file or directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageExit;
  }

  try {
    if (*extract) return CmdExtract(o);
    if (*smooth) return CmdSmooth(o);
    if (*train) return CmdTrain(o);
    if (*evaluate) return CmdEvaluate(o);
    if (*pipeline) return CmdPipeline(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataExit;
  }
  return kUsageExit;
}
