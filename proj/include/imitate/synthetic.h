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

#ifndef IMITATE_SYNTHETIC_H_
#define IMITATE_SYNTHETIC_H_

#include <cstddef>

#include "imitate/angles.h"
#include "imitate/env.h"
#include "imitate/keypoints.h"

namespace imitate {

// Sinusoidal walking-like pattern: joint j follows
//   offset[j] + amplitude[j] * sin(2 pi t / period + phase[j]),
// all in radians. Walking() swings the arms and legs in antiphase around a
// slightly flexed elbow and knee, over a 200-frame stride.
struct GaitParams {
  std::size_t frames = 100;
  double frame_rate = 30.0;
  double period = 100.0;  // frames per stride
  JointAngles amplitude{};
  JointAngles offset{};
  JointAngles phase{};

  static GaitParams Walking();
};

AngleTrajectory SyntheticGait(const GaitParams& params);

// Every frame sets `joint` to `value`; other joints are zero. All valid.
AngleTrajectory ConstantDemo(std::size_t frames, Joint joint, double value,
                             double frame_rate = 30.0);

// Draws the figure for `angles` as image keypoints, `pixels_per_meter` scale,
// hips at `origin`. The figure is placed so that ExtractTrajectory recovers
// the same joint angles. Head keypoints sit above the neck.
KeypointSequence RenderKeypoints(const AngleTrajectory& angles,
                                 const SkeletonModel& model,
                                 double pixels_per_meter = 400.0,
                                 const Vec2& origin = Vec2(320.0, 240.0));

}  // namespace imitate

#endif  // IMITATE_SYNTHETIC_H_
