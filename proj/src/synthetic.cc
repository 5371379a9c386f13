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

#include "imitate/synthetic.h"

#include <cmath>
#include <numbers>

#include "imitate/error.h"

namespace imitate {

GaitParams GaitParams::Walking() {
  GaitParams p;
  p.period = 200.0;
  auto set = [&](Joint j, double amp_deg, double offset_deg, double phase) {
    const int i = static_cast<int>(j);
    p.amplitude[i] = DegToRad(amp_deg);
    p.offset[i] = DegToRad(offset_deg);
    p.phase[i] = phase;
  };
  constexpr double kPi = std::numbers::pi;
  set(Joint::kRShoulder, 8.0, 0.0, kPi);
  set(Joint::kLShoulder, 8.0, 0.0, 0.0);
  set(Joint::kRElbow, 4.0, 10.0, kPi);
  set(Joint::kLElbow, 4.0, 10.0, 0.0);
  set(Joint::kRHip, 8.0, 0.0, 0.0);
  set(Joint::kLHip, 8.0, 0.0, kPi);
  set(Joint::kRKnee, 6.0, -12.0, 0.0);
  set(Joint::kLKnee, 6.0, -12.0, kPi);
  return p;
}

AngleTrajectory SyntheticGait(const GaitParams& params) {
  if (params.frames == 0) ThrowUsage("synthetic gait needs at least one frame");
  if (!(params.period > 0.0)) ThrowUsage("synthetic gait period must be > 0");
  std::vector<AngleFrame> frames(params.frames);
  for (std::size_t t = 0; t < params.frames; ++t) {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(t) / params.period;
    for (int j = 0; j < kJointCount; ++j) {
      frames[t].angles[j] =
          params.offset[j] + params.amplitude[j] * std::sin(w + params.phase[j]);
      frames[t].valid[j] = true;
    }
  }
  return AngleTrajectory(std::move(frames), params.frame_rate);
}

AngleTrajectory ConstantDemo(std::size_t frames, Joint joint, double value,
                             double frame_rate) {
  if (frames == 0) ThrowUsage("demo needs at least one frame");
  AngleFrame f;
  f.angles[static_cast<int>(joint)] = value;
  f.valid.fill(true);
  return AngleTrajectory(std::vector<AngleFrame>(frames, f), frame_rate);
}

KeypointSequence RenderKeypoints(const AngleTrajectory& angles,
                                 const SkeletonModel& model,
                                 double pixels_per_meter, const Vec2& origin) {
  using K = KeypointId;
  // Rotating the world by half a turn maps y-up to the image's y-down while
  // keeping orientation, so signed angles survive the trip.
  auto to_image = [&](const Vec2& world) {
    return Vec2(origin.x() - pixels_per_meter * world.x(),
                origin.y() - pixels_per_meter * world.y());
  };

  std::vector<KeypointFrame> frames;
  frames.reserve(angles.size());
  for (const auto& af : angles.frames()) {
    const BodyPositions body = ForwardKinematics(af.angles, model);
    KeypointFrame kf;
    auto put = [&](K id, const Vec2& world) {
      const Vec2 p = to_image(world);
      kf[id] = Keypoint{p.x(), p.y(), 1.0, true};
    };
    put(K::kRShoulder, body[BodyPoint::kRShoulder]);
    put(K::kRElbow, body[BodyPoint::kRElbow]);
    put(K::kRWrist, body[BodyPoint::kRWrist]);
    put(K::kLShoulder, body[BodyPoint::kLShoulder]);
    put(K::kLElbow, body[BodyPoint::kLElbow]);
    put(K::kLWrist, body[BodyPoint::kLWrist]);
    put(K::kRHip, body[BodyPoint::kRHip]);
    put(K::kRKnee, body[BodyPoint::kRKnee]);
    put(K::kRAnkle, body[BodyPoint::kRAnkle]);
    put(K::kLHip, body[BodyPoint::kLHip]);
    put(K::kLKnee, body[BodyPoint::kLKnee]);
    put(K::kLAnkle, body[BodyPoint::kLAnkle]);

    const Vec2 neck(0.0, model.torso);
    const double head = 0.25 * model.torso;
    put(K::kNeck, neck);
    put(K::kNose, neck + Vec2(0.0, head));
    put(K::kREye, neck + Vec2(-0.02, 1.2 * head));
    put(K::kLEye, neck + Vec2(0.02, 1.2 * head));
    put(K::kREar, neck + Vec2(-0.04, 1.1 * head));
    put(K::kLEar, neck + Vec2(0.04, 1.1 * head));
    frames.push_back(kf);
  }
  return KeypointSequence(std::move(frames), angles.frame_rate());
}

}  // namespace imitate
