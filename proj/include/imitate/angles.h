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

#ifndef IMITATE_ANGLES_H_
#define IMITATE_ANGLES_H_

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "imitate/keypoints.h"

namespace imitate {

inline constexpr int kJointCount = 8;

enum class Joint : int {
  kRShoulder = 0,
  kLShoulder,
  kRElbow,
  kLElbow,
  kRHip,
  kLHip,
  kRKnee,
  kLKnee,
};

// "r-shoulder" style name.
std::string_view JointName(Joint joint);
// "r_shoulder" style name, used as the CSV column header.
std::string_view JointColumnName(Joint joint);
std::optional<Joint> JointFromName(std::string_view name);

using Vec2 = Eigen::Vector2d;
using JointAngles = std::array<double, kJointCount>;
using JointFlags = std::array<bool, kJointCount>;

// Three-point joint construction. An empty `first` stands for the vertical
// reference: the segment into the vertex runs straight down the image, so a
// limb hanging below the vertex reads as zero.
struct JointDefinition {
  Joint joint;
  std::optional<KeypointId> first;
  KeypointId vertex;
  KeypointId end;
};

// Shoulder = (vertical, shoulder, elbow), elbow = (shoulder, elbow, wrist),
// hip = (vertical, hip, knee), knee = (hip, knee, ankle), in Joint order.
const std::array<JointDefinition, kJointCount>& DefaultJointDefinitions();

// Signed angle in radians, in [-pi, pi], from direction p1->p2 to direction
// p2->p3; positive is counter-clockwise in the (x, y) axes of the points.
// Collinear points in order give 0. Throws kNumeric on a zero-length segment.
double ThreePointAngle(const Vec2& p1, const Vec2& p2, const Vec2& p3);

// Signed angle from direction `from` to direction `to`.
double SignedAngle(const Vec2& from, const Vec2& to);

// The point `drop` pixels below `p` (image y grows downward).
Vec2 VerticalReference(const Vec2& p, double drop);

struct AngleFrame {
  JointAngles angles{};
  JointFlags valid{};

  double operator[](Joint j) const { return angles[static_cast<int>(j)]; }
};

// Per-frame joint angles in radians. Never empty.
class AngleTrajectory {
 public:
  AngleTrajectory(std::vector<AngleFrame> frames, double frame_rate);

  const std::vector<AngleFrame>& frames() const { return frames_; }
  std::size_t size() const { return frames_.size(); }
  double frame_rate() const { return frame_rate_; }
  const AngleFrame& operator[](std::size_t i) const { return frames_[i]; }

  // One joint's values over time, and its validity flags.
  std::vector<double> Channel(Joint joint) const;
  std::vector<bool> ChannelValid(Joint joint) const;

 private:
  std::vector<AngleFrame> frames_;
  double frame_rate_;
};

inline constexpr double kDefaultVerticalDrop = 100.0;

AngleTrajectory ExtractTrajectory(
    const KeypointSequence& sequence,
    const std::array<JointDefinition, kJointCount>& definitions =
        DefaultJointDefinitions(),
    double vertical_drop = kDefaultVerticalDrop);

// Angle CSV: `frame,r_shoulder,...,l_knee`, degrees with 6 decimals, empty
// cells for invalid angles.
std::string FormatAngleCsv(const AngleTrajectory& trajectory);
AngleTrajectory ParseAngleCsv(std::string_view text, double frame_rate = 30.0);

void WriteAngleCsv(const std::filesystem::path& path,
                   const AngleTrajectory& trajectory);
AngleTrajectory ReadAngleCsv(const std::filesystem::path& path,
                             double frame_rate = 30.0);

double DegToRad(double degrees);
double RadToDeg(double radians);

// Fixed-point text with `decimals` digits; never prints "-0.000...".
std::string FormatFixed(double value, int decimals = 6);

}  // namespace imitate

#endif  // IMITATE_ANGLES_H_
