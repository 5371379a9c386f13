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

#include "imitate/metrics.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "imitate/error.h"
#include "json.hpp"

namespace imitate {
namespace {

constexpr std::array<std::string_view, kJointGroupCount> kGroupNames = {
    "Shoulder", "Elbow", "Thigh", "Knee"};

int I(Joint j) { return static_cast<int>(j); }

void CheckLengths(const AngleTrajectory& a, const AngleTrajectory& b) {
  if (a.size() != b.size()) {
    ThrowUsage("trajectories differ in length: " + std::to_string(a.size()) +
               " vs " + std::to_string(b.size()));
  }
}

// Left/right mean of a group in one frame, if both sides are valid.
std::optional<double> GroupMean(const AngleFrame& f, JointGroup g) {
  const int l = I(LeftJoint(g));
  const int r = I(RightJoint(g));
  if (!f.valid[l] || !f.valid[r]) return std::nullopt;
  return 0.5 * (f.angles[l] + f.angles[r]);
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) ThrowData("cannot write " + path.string());
  out << text;
  if (!out) ThrowData("write failed: " + path.string());
}

std::string Cell(const std::optional<TagMetrics>& tag,
                 const std::array<Metric, kJointGroupCount> TagMetrics::*field,
                 int group) {
  if (!tag) return "";
  return FormatFixed(((*tag).*field)[group].value);
}

std::string MetricTable(const ComparisonReport& report,
                        const std::array<Metric, kJointGroupCount> TagMetrics::*field) {
  std::string out = MetricTableHeader() + "\n" + report.case_name;
  for (const auto* tag : {&report.dense, &report.conv}) {
    for (int g = 0; g < kJointGroupCount; ++g) {
      out += "," + Cell(*tag, field, g);
    }
  }
  return out + "\n";
}

std::string G12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string MaybeFixed(double v) {
  return std::isnan(v) ? std::string() : FormatFixed(v);
}

}  // namespace

std::string_view JointGroupName(JointGroup group) {
  return kGroupNames[static_cast<int>(group)];
}

Joint LeftJoint(JointGroup group) {
  switch (group) {
    case JointGroup::kShoulder: return Joint::kLShoulder;
    case JointGroup::kElbow: return Joint::kLElbow;
    case JointGroup::kThigh: return Joint::kLHip;
    case JointGroup::kKnee: return Joint::kLKnee;
  }
  return Joint::kLShoulder;
}

Joint RightJoint(JointGroup group) {
  switch (group) {
    case JointGroup::kShoulder: return Joint::kRShoulder;
    case JointGroup::kElbow: return Joint::kRElbow;
    case JointGroup::kThigh: return Joint::kRHip;
    case JointGroup::kKnee: return Joint::kRKnee;
  }
  return Joint::kRShoulder;
}

Metric MeanAngleError(const AngleTrajectory& pred,
                      const AngleTrajectory& input, JointGroup group) {
  CheckLengths(pred, input);
  Metric m;
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    const auto p = GroupMean(pred[t], group);
    const auto in = GroupMean(input[t], group);
    if (!p || !in) {
      ++m.excluded_frames;
      continue;
    }
    sum += RadToDeg(*in - *p);
    ++used;
  }
  m.value = used > 0 ? sum / static_cast<double>(used) : 0.0;
  return m;
}

double EuclideanDistance(std::span<const double> pred,
                         std::span<const double> orig) {
  if (pred.size() != orig.size()) {
    ThrowUsage("series differ in length: " + std::to_string(pred.size()) +
               " vs " + std::to_string(orig.size()));
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    const double d = pred[t] - orig[t];
    sum += d * d;
  }
  return std::sqrt(sum);
}

Metric JointEuclidean(const AngleTrajectory& pred, const AngleTrajectory& orig,
                      Joint joint) {
  CheckLengths(pred, orig);
  const int j = I(joint);
  std::vector<double> a, b;
  Metric m;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    if (!pred[t].valid[j] || !orig[t].valid[j]) {
      ++m.excluded_frames;
      continue;
    }
    a.push_back(RadToDeg(pred[t].angles[j]));
    b.push_back(RadToDeg(orig[t].angles[j]));
  }
  m.value = EuclideanDistance(a, b);
  return m;
}

Metric GroupEuclidean(const AngleTrajectory& pred, const AngleTrajectory& orig,
                      JointGroup group) {
  CheckLengths(pred, orig);
  std::vector<double> a, b;
  Metric m;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    const auto p = GroupMean(pred[t], group);
    const auto o = GroupMean(orig[t], group);
    if (!p || !o) {
      ++m.excluded_frames;
      continue;
    }
    a.push_back(RadToDeg(*p));
    b.push_back(RadToDeg(*o));
  }
  m.value = EuclideanDistance(a, b);
  return m;
}

std::vector<double> RmsErrorSeries(const AngleTrajectory& pred,
                                   const AngleTrajectory& orig) {
  CheckLengths(pred, orig);
  std::vector<double> out;
  out.reserve(pred.size());
  for (std::size_t t = 0; t < pred.size(); ++t) {
    double sum = 0.0;
    int used = 0;
    for (int j = 0; j < kJointCount; ++j) {
      if (!pred[t].valid[j] || !orig[t].valid[j]) continue;
      const double d = RadToDeg(pred[t].angles[j] - orig[t].angles[j]);
      sum += d * d;
      ++used;
    }
    out.push_back(used > 0 ? std::sqrt(sum / used)
                           : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

TagMetrics ComputeMetrics(const AngleTrajectory& produced,
                          const AngleTrajectory& original) {
  TagMetrics m{{}, {}, {}, {}, produced, true, 0.0};
  for (int g = 0; g < kJointGroupCount; ++g) {
    const auto group = static_cast<JointGroup>(g);
    m.mean_angle_error[g] = MeanAngleError(produced, original, group);
    m.euclidean[g] = GroupEuclidean(produced, original, group);
  }
  for (int j = 0; j < kJointCount; ++j) {
    m.joint_euclidean[j] = JointEuclidean(produced, original, static_cast<Joint>(j));
  }
  m.rms_series = RmsErrorSeries(produced, original);
  return m;
}

std::string MetricTableHeader() {
  std::string header = "case";
  for (const char* tag : {"F.", "C."}) {
    for (auto name : kGroupNames) {
      header += ',';
      header += tag;
      header += name;
    }
  }
  return header;
}

void EmitReport(const ComparisonReport& report,
                const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    ThrowData("cannot create output directory " + out_dir.string());
  }

  WriteText(out_dir / "mean_angle_error.csv",
            MetricTable(report, &TagMetrics::mean_angle_error));
  WriteText(out_dir / "euclidean.csv",
            MetricTable(report, &TagMetrics::euclidean));

  std::string loss = "epoch,mse,rmse\n";
  for (const auto& e : report.loss_curve) {
    loss += std::to_string(e.epoch) + "," + G12(e.mse) + "," + G12(e.rmse) + "\n";
  }
  WriteText(out_dir / "loss_curve.csv", loss);

  std::string joints = "joint,F,C\n";
  for (int j = 0; j < kJointCount; ++j) {
    joints += std::string(JointColumnName(static_cast<Joint>(j)));
    for (const auto* tag : {&report.dense, &report.conv}) {
      joints += ",";
      if (*tag) joints += FormatFixed((*tag)->joint_euclidean[j].value);
    }
    joints += "\n";
  }
  WriteText(out_dir / "joint_euclidean.csv", joints);

  std::size_t frames = 0;
  if (report.original) frames = report.original->size();
  for (const auto* tag : {&report.dense, &report.conv}) {
    if (*tag) frames = std::max(frames, (*tag)->produced.size());
  }

  std::string rms = "frame,F,C\n";
  for (std::size_t t = 0; t < frames; ++t) {
    rms += std::to_string(t);
    for (const auto* tag : {&report.dense, &report.conv}) {
      rms += ",";
      if (*tag && t < (*tag)->rms_series.size()) {
        rms += MaybeFixed((*tag)->rms_series[t]);
      }
    }
    rms += "\n";
  }
  WriteText(out_dir / "rms_error.csv", rms);

  std::string series = "frame";
  for (const char* prefix : {"orig_", "F_", "C_"}) {
    for (int j = 0; j < kJointCount; ++j) {
      series += std::string(",") + prefix +
                std::string(JointColumnName(static_cast<Joint>(j)));
    }
  }
  series += "\n";
  auto append_frame = [&](const std::optional<AngleTrajectory>& traj,
                          std::size_t t) {
    for (int j = 0; j < kJointCount; ++j) {
      series += ",";
      if (traj && t < traj->size() && (*traj)[t].valid[j]) {
        series += FormatFixed(RadToDeg((*traj)[t].angles[j]));
      }
    }
  };
  const std::optional<AngleTrajectory> dense_traj =
      report.dense ? std::optional(report.dense->produced) : std::nullopt;
  const std::optional<AngleTrajectory> conv_traj =
      report.conv ? std::optional(report.conv->produced) : std::nullopt;
  for (std::size_t t = 0; t < frames; ++t) {
    series += std::to_string(t);
    append_frame(report.original, t);
    append_frame(dense_traj, t);
    append_frame(conv_traj, t);
    series += "\n";
  }
  WriteText(out_dir / "joint_series.csv", series);

  nlohmann::ordered_json summary;
  summary["case"] = report.case_name;
  for (const auto& [key, tag] :
       {std::pair{"F", &report.dense}, std::pair{"C", &report.conv}}) {
    if (!*tag) continue;
    const TagMetrics& m = **tag;
    nlohmann::ordered_json t;
    t["within_limits"] = m.within_limits;
    t["total_reward"] = m.total_reward;
    nlohmann::ordered_json excluded;
    for (int g = 0; g < kJointGroupCount; ++g) {
      excluded[std::string(kGroupNames[g])] = m.mean_angle_error[g].excluded_frames;
    }
    t["excluded_frames"] = excluded;
    summary[key] = t;
  }
  WriteText(out_dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace imitate
