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

#ifndef IMITATE_METRICS_H_
#define IMITATE_METRICS_H_

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imitate/angles.h"
#include "imitate/dqn.h"

namespace imitate {

// Left/right joint pairs reported together. Thigh is the hip joint.
enum class JointGroup : int { kShoulder = 0, kElbow, kThigh, kKnee };
inline constexpr int kJointGroupCount = 4;

std::string_view JointGroupName(JointGroup group);
Joint LeftJoint(JointGroup group);
Joint RightJoint(JointGroup group);

// A metric plus the number of frames dropped because a needed angle was
// invalid in either trajectory.
struct Metric {
  double value = 0.0;
  std::size_t excluded_frames = 0;
};

// Mean over frames of avg(input L, R) - avg(pred L, R), in degrees. Positive
// means the predicted angles are smaller. Throws kUsage on a length mismatch.
Metric MeanAngleError(const AngleTrajectory& pred,
                      const AngleTrajectory& input, JointGroup group);

// sqrt(sum_t (pred_t - orig_t)^2), in the units of the inputs.
double EuclideanDistance(std::span<const double> pred,
                         std::span<const double> orig);

// Euclidean distance in degrees between one joint's series.
Metric JointEuclidean(const AngleTrajectory& pred, const AngleTrajectory& orig,
                      Joint joint);

// Euclidean distance in degrees between the groups' left/right mean series.
Metric GroupEuclidean(const AngleTrajectory& pred, const AngleTrajectory& orig,
                      JointGroup group);

// Per frame, sqrt of the mean squared difference over the joints valid in
// both trajectories, in degrees; NaN for a frame with no such joint.
std::vector<double> RmsErrorSeries(const AngleTrajectory& pred,
                                   const AngleTrajectory& orig);

// Everything measured for one network's rollout against the original.
struct TagMetrics {
  std::array<Metric, kJointGroupCount> mean_angle_error;
  std::array<Metric, kJointGroupCount> euclidean;
  std::array<Metric, kJointCount> joint_euclidean;
  std::vector<double> rms_series;
  AngleTrajectory produced;
  bool within_limits = true;
  double total_reward = 0.0;
};

TagMetrics ComputeMetrics(const AngleTrajectory& produced,
                          const AngleTrajectory& original);

// Two optional columns, F. (dense) and C. (conv1d-front), as in the
// comparison tables.
struct ComparisonReport {
  std::string case_name = "case";
  std::optional<AngleTrajectory> original;
  std::optional<TagMetrics> dense;
  std::optional<TagMetrics> conv;
  std::vector<EpochLog> loss_curve;
};

// Header shared by mean_angle_error.csv and euclidean.csv.
std::string MetricTableHeader();

// Writes mean_angle_error.csv, euclidean.csv, loss_curve.csv,
// joint_euclidean.csv, rms_error.csv, joint_series.csv and summary.json into
// `out_dir` (created if needed). Throws kData if it cannot write.
void EmitReport(const ComparisonReport& report,
                const std::filesystem::path& out_dir);

}  // namespace imitate

#endif  // IMITATE_METRICS_H_
