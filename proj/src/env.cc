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

#include "imitate/env.h"

#include <algorithm>
#include <cmath>

#include "imitate/error.h"
#include "imitate/rng.h"

namespace imitate {
namespace {

constexpr std::array<std::string_view, kBodyPointCount> kBodyPointNames = {
    "r-shoulder", "r-elbow", "r-wrist", "l-shoulder", "l-elbow", "l-wrist",
    "r-hip",      "r-knee",  "r-ankle", "l-hip",      "l-knee",  "l-ankle",
};

Vec2 LimbDirection(double absolute_angle) {
  return Vec2(std::sin(absolute_angle), -std::cos(absolute_angle));
}

int Index(Joint j) { return static_cast<int>(j); }

}  // namespace

void SkeletonModel::Validate() const {
  for (double len : {upper_arm, forearm, thigh, shank, torso}) {
    if (!(len > 0.0) || !std::isfinite(len)) {
      ThrowUsage("skeleton limb lengths must be positive and finite");
    }
  }
}

double SkeletonModel::TotalLength() const {
  return upper_arm + forearm + thigh + shank + torso;
}

JointLimits JointLimits::Default() {
  // Degrees, roughly the Poppy humanoid's sagittal ranges.
  constexpr std::array<std::array<double, 2>, kJointCount> deg = {{
      {-120.0, 120.0},  // r-shoulder
      {-120.0, 120.0},  // l-shoulder
      {-148.0, 148.0},  // r-elbow
      {-148.0, 148.0},  // l-elbow
      {-104.0, 84.0},   // r-hip
      {-104.0, 84.0},   // l-hip
      {-134.0, 134.0},  // r-knee
      {-134.0, 134.0},  // l-knee
  }};
  JointLimits limits;
  for (int j = 0; j < kJointCount; ++j) {
    limits.min[j] = DegToRad(deg[j][0]);
    limits.max[j] = DegToRad(deg[j][1]);
  }
  return limits;
}

void JointLimits::Validate() const {
  for (int j = 0; j < kJointCount; ++j) {
    if (!(min[j] < max[j])) {
      ThrowUsage("joint limits for '" +
                 std::string(JointName(static_cast<Joint>(j))) +
                 "' need min < max");
    }
  }
}

double JointLimits::Clamp(int joint, double value) const {
  return std::clamp(value, min[joint], max[joint]);
}

JointAngles JointLimits::Clamp(const JointAngles& angles) const {
  JointAngles out;
  for (int j = 0; j < kJointCount; ++j) out[j] = Clamp(j, angles[j]);
  return out;
}

bool JointLimits::Contains(const JointAngles& angles) const {
  for (int j = 0; j < kJointCount; ++j) {
    if (!(angles[j] >= min[j] && angles[j] <= max[j])) return false;
  }
  return true;
}

std::string_view BodyPointName(BodyPoint p) {
  return kBodyPointNames[static_cast<int>(p)];
}

BodyPoint ParseBodyPoint(std::string_view name) {
  for (int i = 0; i < kBodyPointCount; ++i) {
    if (kBodyPointNames[i] == name) return static_cast<BodyPoint>(i);
  }
  ThrowUsage("unknown body point '" + std::string(name) + "'");
}

BodyPositions ForwardKinematics(const JointAngles& angles,
                                const SkeletonModel& model) {
  BodyPositions out;
  auto set = [&](BodyPoint p, const Vec2& v) {
    out.points[static_cast<int>(p)] = v;
  };
  auto chain = [&](const Vec2& root, double first, double second,
                   double len1, double len2, BodyPoint mid, BodyPoint tip) {
    const Vec2 m = root + len1 * LimbDirection(first);
    set(mid, m);
    set(tip, m + len2 * LimbDirection(first + second));
  };

  const Vec2 hip(0.0, 0.0);
  const Vec2 shoulder(0.0, model.torso);
  set(BodyPoint::kRShoulder, shoulder);
  set(BodyPoint::kLShoulder, shoulder);
  set(BodyPoint::kRHip, hip);
  set(BodyPoint::kLHip, hip);

  const auto a = [&](Joint j) { return angles[Index(j)]; };
  chain(shoulder, a(Joint::kRShoulder), a(Joint::kRElbow), model.upper_arm,
        model.forearm, BodyPoint::kRElbow, BodyPoint::kRWrist);
  chain(shoulder, a(Joint::kLShoulder), a(Joint::kLElbow), model.upper_arm,
        model.forearm, BodyPoint::kLElbow, BodyPoint::kLWrist);
  chain(hip, a(Joint::kRHip), a(Joint::kRKnee), model.thigh, model.shank,
        BodyPoint::kRKnee, BodyPoint::kRAnkle);
  chain(hip, a(Joint::kLHip), a(Joint::kLKnee), model.thigh, model.shank,
        BodyPoint::kLKnee, BodyPoint::kLAnkle);
  return out;
}

std::vector<PositionSlot> DefaultPositionSlots() {
  using P = BodyPoint;
  return {{P::kRKnee, 0},  {P::kRKnee, 1},  {P::kLKnee, 0},  {P::kLKnee, 1},
          {P::kRAnkle, 0}, {P::kRAnkle, 1}, {P::kLAnkle, 0}, {P::kLAnkle, 1},
          {P::kRWrist, 0}, {P::kRWrist, 1}, {P::kLWrist, 0}};
}

std::string_view ResetPoseName(ResetPose pose) {
  return pose == ResetPose::kDemo ? "demo" : "zero";
}

ResetPose ParseResetPose(std::string_view name) {
  if (name == "demo") return ResetPose::kDemo;
  if (name == "zero") return ResetPose::kZero;
  ThrowUsage("unknown reset pose '" + std::string(name) + "'");
}

void EnvConfig::Validate() const {
  skeleton.Validate();
  limits.Validate();
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    ThrowUsage("env step size must be positive");
  }
  if (active_joints.empty()) ThrowUsage("env needs at least one active joint");
  std::array<bool, kJointCount> seen{};
  for (Joint j : active_joints) {
    if (seen[Index(j)]) ThrowUsage("env active joints contain a duplicate");
    seen[Index(j)] = true;
  }
  if (!(reset_noise >= 0.0)) ThrowUsage("env reset noise must be >= 0");
  if (state_dim < 1) ThrowUsage("env state_dim must be >= 1");
  for (const auto& slot : position_slots) {
    if (slot.axis != 0 && slot.axis != 1) {
      ThrowUsage("position slot axis must be 0 (x) or 1 (y)");
    }
  }
}

ImitationEnv::ImitationEnv(EnvConfig config, AngleTrajectory demo)
    : config_(std::move(config)), demo_(std::move(demo)) {
  config_.Validate();
  targets_.reserve(demo_.size());
  for (const auto& f : demo_.frames()) {
    targets_.push_back(config_.limits.Clamp(f.angles));
  }
}

EnvState ImitationEnv::MakeState(const JointAngles& angles,
                                 const JointAngles& velocities,
                                 std::size_t step) const {
  EnvState s;
  s.angles = angles;
  s.velocities = velocities;
  s.step = step;
  s.phase = static_cast<double>(step) / static_cast<double>(episode_length());
  s.positions = ForwardKinematics(angles, config_.skeleton);
  return s;
}

EnvState ImitationEnv::Reset(std::uint64_t seed) const {
  JointAngles start{};
  if (config_.reset_pose == ResetPose::kDemo) start = targets_.front();
  if (config_.reset_noise > 0.0) {
    Rng rng = SubStream(seed, "reset");
    for (Joint j : config_.active_joints) {
      start[Index(j)] += config_.reset_noise * (2.0 * UniformUnit(rng) - 1.0);
    }
  }
  return MakeState(config_.limits.Clamp(start), JointAngles{}, 0);
}

double ImitationEnv::TrackingError(const EnvState& state) const {
  const std::size_t frame = std::min(state.step, episode_length() - 1);
  const AngleFrame& demo = demo_[frame];
  const JointAngles& target = targets_[frame];
  double error = 0.0;
  for (Joint j : config_.active_joints) {
    const int i = Index(j);
    if (demo.valid[i]) error += std::abs(state.angles[i] - target[i]);
  }
  return error;
}

StepResult ImitationEnv::Step(const EnvState& state, int action) const {
  if (action < 0 || action >= action_count()) {
    ThrowUsage("action " + std::to_string(action) + " outside [0, " +
               std::to_string(action_count()) + ")");
  }
  if (state.step >= episode_length()) {
    ThrowUsage("step called on a finished episode");
  }
  const int joint = Index(config_.active_joints[action / 2]);
  const double delta = action % 2 == 0 ? config_.step_size : -config_.step_size;

  JointAngles angles = state.angles;
  angles[joint] = config_.limits.Clamp(joint, angles[joint] + delta);
  JointAngles velocities{};
  for (int j = 0; j < kJointCount; ++j) {
    velocities[j] = angles[j] - state.angles[j];
  }

  StepResult result;
  result.state = MakeState(angles, velocities, state.step + 1);
  result.reward = TrackingError(state) - TrackingError(result.state);
  result.terminal = result.state.step >= episode_length();
  return result;
}

Eigen::VectorXd ImitationEnv::Encode(const EnvState& state) const {
  std::vector<double> features;
  features.reserve(2 * kJointCount + 1 + config_.position_slots.size());
  const JointLimits& lim = config_.limits;
  for (int j = 0; j < kJointCount; ++j) {
    const double mid = 0.5 * (lim.max[j] + lim.min[j]);
    const double half = 0.5 * (lim.max[j] - lim.min[j]);
    features.push_back((state.angles[j] - mid) / half);
  }
  for (int j = 0; j < kJointCount; ++j) {
    features.push_back(state.velocities[j] / config_.step_size);
  }
  features.push_back(state.phase);
  for (const auto& slot : config_.position_slots) {
    features.push_back(state.positions[slot.point][slot.axis]);
  }

  Eigen::VectorXd out = Eigen::VectorXd::Zero(config_.state_dim);
  const std::size_t n =
      std::min(features.size(), static_cast<std::size_t>(config_.state_dim));
  for (std::size_t i = 0; i < n; ++i) out(static_cast<Eigen::Index>(i)) = features[i];
  return out;
}

}  // namespace imitate
