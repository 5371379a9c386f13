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

#include "imitate/angles.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "imitate/error.h"

namespace imitate {
namespace {

constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "r-shoulder", "l-shoulder", "r-elbow", "l-elbow",
    "r-hip",      "l-hip",      "r-knee",  "l-knee",
};

constexpr std::array<std::string_view, kJointCount> kColumnNames = {
    "r_shoulder", "l_shoulder", "r_elbow", "l_elbow",
    "r_hip",      "l_hip",      "r_knee",  "l_knee",
};

std::vector<std::string_view> SplitCells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string AngleCsvHeader() {
  std::string header = "frame";
  for (auto name : kColumnNames) {
    header += ',';
    header += name;
  }
  return header;
}

}  // namespace

std::string_view JointName(Joint joint) {
  return kJointNames[static_cast<int>(joint)];
}

std::string_view JointColumnName(Joint joint) {
  return kColumnNames[static_cast<int>(joint)];
}

std::optional<Joint> JointFromName(std::string_view name) {
  for (int j = 0; j < kJointCount; ++j) {
    if (kJointNames[j] == name || kColumnNames[j] == name) {
      return static_cast<Joint>(j);
    }
  }
  return std::nullopt;
}

const std::array<JointDefinition, kJointCount>& DefaultJointDefinitions() {
  using K = KeypointId;
  static const std::array<JointDefinition, kJointCount> defs = {{
      {Joint::kRShoulder, std::nullopt, K::kRShoulder, K::kRElbow},
      {Joint::kLShoulder, std::nullopt, K::kLShoulder, K::kLElbow},
      {Joint::kRElbow, K::kRShoulder, K::kRElbow, K::kRWrist},
      {Joint::kLElbow, K::kLShoulder, K::kLElbow, K::kLWrist},
      {Joint::kRHip, std::nullopt, K::kRHip, K::kRKnee},
      {Joint::kLHip, std::nullopt, K::kLHip, K::kLKnee},
      {Joint::kRKnee, K::kRHip, K::kRKnee, K::kRAnkle},
      {Joint::kLKnee, K::kLHip, K::kLKnee, K::kLAnkle},
  }};
  return defs;
}

double SignedAngle(const Vec2& from, const Vec2& to) {
  const double cross = from.x() * to.y() - from.y() * to.x();
  const double dot = from.dot(to);
  return std::atan2(cross, dot);
}

double ThreePointAngle(const Vec2& p1, const Vec2& p2, const Vec2& p3) {
  const Vec2 first = p2 - p1;
  const Vec2 second = p3 - p2;
  if (first.isZero(0.0) || second.isZero(0.0)) {
    ThrowNumeric("degenerate segment: coincident points in angle");
  }
  return SignedAngle(first, second);
}

Vec2 VerticalReference(const Vec2& p, double drop) {
  return Vec2(p.x(), p.y() + drop);
}

AngleTrajectory::AngleTrajectory(std::vector<AngleFrame> frames,
                                 double frame_rate)
    : frames_(std::move(frames)), frame_rate_(frame_rate) {
  if (frames_.empty()) ThrowData("angle trajectory is empty");
  if (!(frame_rate_ > 0.0)) ThrowUsage("frame rate must be positive");
}

std::vector<double> AngleTrajectory::Channel(Joint joint) const {
  std::vector<double> out;
  out.reserve(frames_.size());
  for (const auto& f : frames_) out.push_back(f[joint]);
  return out;
}

std::vector<bool> AngleTrajectory::ChannelValid(Joint joint) const {
  std::vector<bool> out;
  out.reserve(frames_.size());
  for (const auto& f : frames_) out.push_back(f.valid[static_cast<int>(joint)]);
  return out;
}

AngleTrajectory ExtractTrajectory(
    const KeypointSequence& sequence,
    const std::array<JointDefinition, kJointCount>& definitions,
    double vertical_drop) {
  if (sequence.empty()) ThrowData("keypoint sequence is empty");
  if (!(vertical_drop > 0.0)) ThrowUsage("vertical drop must be positive");

  auto point = [](const Keypoint& kp) { return Vec2(kp.x, kp.y); };

  std::vector<AngleFrame> frames;
  frames.reserve(sequence.size());
  for (const auto& kf : sequence.frames()) {
    AngleFrame af;
    for (const auto& def : definitions) {
      const int j = static_cast<int>(def.joint);
      const Keypoint& vertex = kf[def.vertex];
      const Keypoint& end = kf[def.end];
      bool present = vertex.present && end.present;
      if (def.first) present = present && kf[*def.first].present;
      if (!present) continue;

      const Vec2 v = point(vertex);
      const Vec2 limb = point(end) - v;
      // Reference direction into the vertex: along the incoming segment, or
      // straight down for the vertical reference.
      const Vec2 incoming = def.first
                                ? Vec2(v - point(kf[*def.first]))
                                : Vec2(VerticalReference(v, vertical_drop) - v);
      if (incoming.isZero(0.0) || limb.isZero(0.0)) continue;
      af.angles[j] = SignedAngle(incoming, limb);
      af.valid[j] = true;
    }
    frames.push_back(af);
  }
  return AngleTrajectory(std::move(frames), sequence.frame_rate());
}

double DegToRad(double degrees) { return degrees * std::numbers::pi / 180.0; }
double RadToDeg(double radians) { return radians * 180.0 / std::numbers::pi; }

std::string FormatFixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string out(buf);
  if (out.front() == '-' &&
      out.find_first_not_of("-0.") == std::string::npos) {
    out.erase(0, 1);
  }
  return out;
}

std::string FormatAngleCsv(const AngleTrajectory& trajectory) {
  std::string out = AngleCsvHeader() + "\n";
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    out += std::to_string(t);
    const AngleFrame& f = trajectory[t];
    for (int j = 0; j < kJointCount; ++j) {
      out += ',';
      if (f.valid[j]) out += FormatFixed(RadToDeg(f.angles[j]));
    }
    out += '\n';
  }
  return out;
}

AngleTrajectory ParseAngleCsv(std::string_view text, double frame_rate) {
  std::vector<AngleFrame> frames;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    const std::string where = "angle csv line " + std::to_string(line_no);
    if (!saw_header) {
      if (line != AngleCsvHeader()) ThrowData(where + ": unexpected header");
      saw_header = true;
      continue;
    }
    const auto cells = SplitCells(line);
    if (cells.size() != kJointCount + 1) {
      ThrowData(where + ": expected " + std::to_string(kJointCount + 1) +
                " columns, got " + std::to_string(cells.size()));
    }
    std::size_t index = 0;
    auto [iptr, iec] = std::from_chars(cells[0].data(),
                                       cells[0].data() + cells[0].size(), index);
    if (iec != std::errc() || iptr != cells[0].data() + cells[0].size() ||
        index != frames.size()) {
      ThrowData(where + ": frame index must count up from 0");
    }
    AngleFrame f;
    for (int j = 0; j < kJointCount; ++j) {
      std::string_view cell = cells[j + 1];
      if (cell.empty()) continue;
      double degrees = 0.0;
      auto [ptr, ec] =
          std::from_chars(cell.data(), cell.data() + cell.size(), degrees);
      if (ec != std::errc() || ptr != cell.data() + cell.size() ||
          !std::isfinite(degrees)) {
        ThrowData(where + ": bad value for " +
                  std::string(kColumnNames[j]));
      }
      f.angles[j] = DegToRad(degrees);
      f.valid[j] = true;
    }
    frames.push_back(f);
  }
  if (!saw_header) ThrowData("angle csv: missing header");
  return AngleTrajectory(std::move(frames), frame_rate);
}

void WriteAngleCsv(const std::filesystem::path& path,
                   const AngleTrajectory& trajectory) {
  std::ofstream out(path, std::ios::binary);
  if (!out) ThrowData("cannot write " + path.string());
  out << FormatAngleCsv(trajectory);
  if (!out) ThrowData("write failed: " + path.string());
}

AngleTrajectory ReadAngleCsv(const std::filesystem::path& path,
                             double frame_rate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowData("cannot open angle csv: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseAngleCsv(buffer.str(), frame_rate);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace imitate
