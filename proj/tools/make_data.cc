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


// Writes the bundled example inputs: a rendered walking clip with a little
// pixel jitter and a short wrist dropout, a constant single-joint demo, and a
// pipeline config for each.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "imitate/angles.h"
#include "imitate/error.h"
#include "imitate/keypoints.h"
#include "imitate/pipeline.h"
#include "imitate/rng.h"
#include "imitate/synthetic.h"

namespace fs = std::filesystem;
using namespace imitate;

namespace {

void Write(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) ThrowData("cannot write " + path.string());
  std::cout << "wrote " << path.string() << "\n";
}

KeypointSequence WalkingClip() {
  const KeypointSequence clean =
      RenderKeypoints(SyntheticGait(GaitParams::Walking()), SkeletonModel{});
  Rng rng = SubStream(2026, "jitter");
  std::vector<KeypointFrame> frames = clean.frames();
  for (std::size_t t = 0; t < frames.size(); ++t) {
    for (Keypoint& k : frames[t].keypoints) {
      if (!k.present) continue;
      k.x += UniformUnit(rng) - 0.5;
      k.y += UniformUnit(rng) - 0.5;
      k.confidence = 0.8 + 0.2 * UniformUnit(rng);
    }
    if (t >= 40 && t < 43) frames[t][KeypointId::kLWrist] = Keypoint{};
  }
  return KeypointSequence(std::move(frames), clean.frame_rate());
}

PipelineConfig WalkConfig() {
  PipelineConfig cfg;
  cfg.case_name = "walk";
  cfg.network.hidden = {64, 64, 64};
  cfg.trainer.gamma = 0.9;
  return cfg;
}

PipelineConfig ToyConfig() {
  PipelineConfig cfg;
  cfg.case_name = "toy";
  cfg.network.hidden = {64, 64, 64};
  cfg.trainer.epochs = 300;
  cfg.env.step_size = DegToRad(1.0);
  cfg.env.active_joints = {Joint::kRShoulder};
  cfg.env.reset_pose = ResetPose::kZero;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("data");
  try {
    Write(root / "walk" / "keypoints.json", SerializeKeypointJson(WalkingClip()));
    Write(root / "walk" / "config.json", SerializePipelineConfig(WalkConfig()));
    Write(root / "toy" / "demo.csv",
          FormatAngleCsv(ConstantDemo(20, Joint::kRShoulder, DegToRad(10.0))));
    Write(root / "toy" / "config.json", SerializePipelineConfig(ToyConfig()));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
