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

#ifndef IMITATE_PIPELINE_H_
#define IMITATE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imitate/angles.h"
#include "imitate/dqn.h"
#include "imitate/env.h"
#include "imitate/keypoints.h"
#include "imitate/metrics.h"
#include "imitate/network.h"
#include "imitate/savgol.h"

namespace imitate {

struct IngestConfig {
  double confidence_threshold = 0.05;
  double frame_rate = 30.0;
  int max_gap = 5;
  double vertical_drop = kDefaultVerticalDrop;

  bool operator==(const IngestConfig&) const = default;
};

struct SmoothingConfig {
  int window = kDefaultSgWindow;
  int order = kDefaultSgOrder;
  EdgeMode edge = EdgeMode::kCopy;

  bool operator==(const SmoothingConfig&) const = default;
};

// Everything a run depends on besides its input files. The JSON schema is
// documented in docs/config.md; missing keys keep these defaults.
struct PipelineConfig {
  std::uint64_t seed = 0;
  std::string case_name = "case";
  IngestConfig ingest;
  SmoothingConfig smoothing;
  EnvConfig env;
  NetworkSpec network;
  TrainerConfig trainer;
  // Write a checkpoint every N epochs; 0 disables.
  int checkpoint_every = 0;

  // Every problem found, empty when valid.
  std::vector<std::string> Problems() const;
  // Throws kUsage listing all problems.
  void Validate() const;
  bool operator==(const PipelineConfig&) const = default;
};

PipelineConfig ParsePipelineConfig(std::string_view json_text);
PipelineConfig LoadPipelineConfig(const std::filesystem::path& path);
std::string SerializePipelineConfig(const PipelineConfig& config);

// The skeleton + limits file: {"skeleton": {...}, "limits_deg": {...}}.
// Fields left out keep the values already in `base`.
EnvConfig ParseEnvFile(std::string_view json_text, EnvConfig base = {});

// --- stages -----------------------------------------------------------------

// parse -> fill gaps -> joint angles.
AngleTrajectory RunExtract(const std::filesystem::path& keypoints,
                           const PipelineConfig& config);

AngleTrajectory RunSmooth(const AngleTrajectory& angles,
                          const PipelineConfig& config);

struct TrainArtifacts {
  TrainResult result;
  std::filesystem::path checkpoint;
  std::filesystem::path log;
};

// Trains on `demo` and writes checkpoint.bin and training_log.csv (plus
// checkpoint_epoch_N.bin every config.checkpoint_every epochs) to out_dir.
TrainArtifacts RunTrain(const AngleTrajectory& demo,
                        const PipelineConfig& config,
                        const std::filesystem::path& out_dir);

// Greedy rollouts of each checkpoint against `demo`, reported under the F.
// (dense) or C. (conv1d-front) columns by network variant. Throws kData if a
// checkpoint does not match config.network or two share a variant.
ComparisonReport RunEvaluate(const std::vector<std::filesystem::path>& checkpoints,
                             const AngleTrajectory& demo,
                             const PipelineConfig& config,
                             const std::filesystem::path& out_dir,
                             const std::vector<EpochLog>& loss_curve = {});

std::vector<EpochLog> ParseTrainingLog(std::string_view text);

}  // namespace imitate

#endif  // IMITATE_PIPELINE_H_
