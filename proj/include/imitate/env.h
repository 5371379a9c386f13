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

#ifndef IMITATE_ENV_H_
#define IMITATE_ENV_H_

#include <array>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "imitate/angles.h"

namespace imitate {

// Limb lengths in meters.
struct SkeletonModel {
  double upper_arm = 0.15;
  double forearm = 0.15;
  double thigh = 0.18;
  double shank = 0.18;
  double torso = 0.25;

  void Validate() const;
  double TotalLength() const;
  bool operator==(const SkeletonModel&) const = default;
};

// Per-joint [min, max] in radians.
struct JointLimits {
  JointAngles min{};
  JointAngles max{};

  static JointLimits Default();
  void Validate() const;
  double Clamp(int joint, double value) const;
  JointAngles Clamp(const JointAngles& angles) const;
  bool Contains(const JointAngles& angles) const;
  bool operator==(const JointLimits&) const = default;
};

enum class BodyPoint : int {
  kRShoulder = 0,
  kRElbow,
  kRWrist,
  kLShoulder,
  kLElbow,
  kLWrist,
  kRHip,
  kRKnee,
  kRAnkle,
  kLHip,
  kLKnee,
  kLAnkle,
};
inline constexpr int kBodyPointCount = 12;

std::string_view BodyPointName(BodyPoint p);
BodyPoint ParseBodyPoint(std::string_view name);

// World-frame positions in meters, y up. The hips sit at the origin and the
// shoulders `torso` above them.
struct BodyPositions {
  std::array<Vec2, kBodyPointCount> points;

  const Vec2& operator[](BodyPoint p) const {
    return points[static_cast<int>(p)];
  }
};

// Chains limb vectors. A limb's absolute direction is its parent's rotated
// counter-clockwise by the joint angle; at zero every limb points straight
// down.
BodyPositions ForwardKinematics(const JointAngles& angles,
                                const SkeletonModel& model);

struct PositionSlot {
  BodyPoint point;
  int axis;  // 0 = x, 1 = y

  bool operator==(const PositionSlot&) const = default;
};

// Knees, ankles, the right wrist and the left wrist's x: 11 coordinates,
// which with 8 angles, 8 velocities and the phase fill 28 inputs.
std::vector<PositionSlot> DefaultPositionSlots();

enum class ResetPose {
  kDemo,  // start on the clamped first demonstration frame
  kZero,  // start from the standing pose
};

std::string_view ResetPoseName(ResetPose pose);
ResetPose ParseResetPose(std::string_view name);

struct EnvConfig {
  SkeletonModel skeleton;
  JointLimits limits = JointLimits::Default();
  // Joint increment per action, radians.
  double step_size = 2.0 * std::numbers::pi / 180.0;
  // Joints the agent drives. Action 2i moves active_joints[i] by +step_size,
  // action 2i + 1 by -step_size. Other joints hold their reset value and do
  // not count towards the tracking error.
  std::vector<Joint> active_joints = {
      Joint::kRShoulder, Joint::kLShoulder, Joint::kRElbow, Joint::kLElbow,
      Joint::kRHip,      Joint::kLHip,      Joint::kRKnee,  Joint::kLKnee};
  ResetPose reset_pose = ResetPose::kDemo;
  // Half-width of uniform noise added to the reset pose, radians.
  double reset_noise = 0.0;
  int state_dim = 28;
  std::vector<PositionSlot> position_slots = DefaultPositionSlots();

  void Validate() const;
  int ActionCount() const { return 2 * static_cast<int>(active_joints.size()); }
  bool operator==(const EnvConfig&) const = default;
};

struct EnvState {
  JointAngles angles{};
  JointAngles velocities{};
  // Steps taken so far; phase = step / episode length.
  std::size_t step = 0;
  double phase = 0.0;
  BodyPositions positions;
};

struct StepResult {
  EnvState state;
  double reward = 0.0;
  bool terminal = false;
};

// Planar kinematic imitation task over one demonstration. An episode has one
// step per demonstration frame. The state at step t is scored against demo
// frame min(t, T - 1), clamped to the limits:
//   E_t = sum over active joints with a valid demo angle of |angle - demo|,
// and each step is rewarded with E_{t-1} - E_t.
class ImitationEnv {
 public:
  ImitationEnv(EnvConfig config, AngleTrajectory demo);

  const EnvConfig& config() const { return config_; }
  const AngleTrajectory& demo() const { return demo_; }
  std::size_t episode_length() const { return demo_.size(); }
  int action_count() const { return config_.ActionCount(); }

  EnvState Reset(std::uint64_t seed = 0) const;

  // Throws kUsage on an out-of-range action or a finished episode.
  StepResult Step(const EnvState& state, int action) const;

  double TrackingError(const EnvState& state) const;

  // [8 angles mapped to [-1, 1] by the limits | 8 velocities / step_size |
  //  phase | position slots], zero-padded or truncated to state_dim.
  Eigen::VectorXd Encode(const EnvState& state) const;

 private:
  EnvState MakeState(const JointAngles& angles, const JointAngles& velocities,
                     std::size_t step) const;

  EnvConfig config_;
  AngleTrajectory demo_;
  std::vector<JointAngles> targets_;
};

}  // namespace imitate

#endif  // IMITATE_ENV_H_
