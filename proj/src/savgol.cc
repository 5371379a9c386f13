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

#include "imitate/savgol.h"

#include <Eigen/Dense>

#include "imitate/error.h"

namespace imitate {

std::string_view EdgeModeName(EdgeMode mode) {
  return mode == EdgeMode::kCopy ? "copy" : "mirror";
}

EdgeMode ParseEdgeMode(std::string_view name) {
  if (name == "copy") return EdgeMode::kCopy;
  if (name == "mirror") return EdgeMode::kMirror;
  ThrowUsage("unknown edge mode '" + std::string(name) +
             "' (expected copy or mirror)");
}

SgFilterSpec SgCoefficients(int window, int polyorder, EdgeMode edge) {
  if (window < 3 || window % 2 == 0) {
    ThrowUsage("Savitzky-Golay window must be odd and >= 3, got " +
               std::to_string(window));
  }
  if (polyorder < 0 || polyorder >= window) {
    ThrowUsage("Savitzky-Golay order must be in [0, window), got " +
               std::to_string(polyorder));
  }
  const int half = (window - 1) / 2;

  // Offsets are scaled to [-1, 1] for conditioning. Column scaling of the
  // design matrix only rescales rows of its pseudo-inverse, and the
  // constant-term row has unit scale, so the smoothing row is unchanged.
  Eigen::MatrixXd design(window, polyorder + 1);
  for (int i = 0; i < window; ++i) {
    const double z = static_cast<double>(i - half) / half;
    double power = 1.0;
    for (int j = 0; j <= polyorder; ++j) {
      design(i, j) = power;
      power *= z;
    }
  }
  const Eigen::MatrixXd pinv = design.householderQr().solve(
      Eigen::MatrixXd::Identity(window, window));

  SgFilterSpec spec;
  spec.window_ = window;
  spec.polyorder_ = polyorder;
  spec.edge_ = edge;
  spec.coefficients_.resize(window);
  for (int i = 0; i < window; ++i) spec.coefficients_[i] = pinv(0, i);
  return spec;
}

std::vector<double> SgApply(std::span<const double> signal,
                            const SgFilterSpec& spec) {
  const int n = static_cast<int>(signal.size());
  const int k = spec.window();
  const int half = spec.half_window();
  if (n < k) {
    ThrowData("signal of length " + std::to_string(n) +
              " is shorter than the smoothing window " + std::to_string(k));
  }
  const auto& c = spec.coefficients();

  // Reflection about the end sample: index -i maps to i, n-1+i to n-1-i.
  auto sample = [&](int i) {
    if (i < 0) return signal[-i];
    if (i >= n) return signal[2 * (n - 1) - i];
    return signal[i];
  };

  std::vector<double> out(signal.begin(), signal.end());
  for (int i = 0; i < n; ++i) {
    const bool interior = i >= half && i < n - half;
    if (!interior && spec.edge() == EdgeMode::kCopy) continue;
    double acc = 0.0;
    for (int z = -half; z <= half; ++z) acc += c[z + half] * sample(i + z);
    out[i] = acc;
  }
  return out;
}

AngleTrajectory SmoothTrajectory(const AngleTrajectory& trajectory,
                                 const SgFilterSpec& spec) {
  std::vector<AngleFrame> frames = trajectory.frames();
  const std::size_t n = frames.size();
  const std::size_t k = static_cast<std::size_t>(spec.window());

  for (int j = 0; j < kJointCount; ++j) {
    std::size_t valid_count = 0;
    for (const auto& f : frames) valid_count += f.valid[j] ? 1 : 0;
    if (valid_count < k) {
      ThrowData("joint '" + std::string(JointName(static_cast<Joint>(j))) +
                "' has " + std::to_string(valid_count) +
                " valid samples, fewer than the smoothing window " +
                std::to_string(k));
    }

    std::size_t t = 0;
    while (t < n) {
      if (!frames[t].valid[j]) {
        ++t;
        continue;
      }
      std::size_t end = t;
      while (end < n && frames[end].valid[j]) ++end;
      if (end - t >= k) {
        std::vector<double> run;
        run.reserve(end - t);
        for (std::size_t i = t; i < end; ++i) run.push_back(frames[i].angles[j]);
        const std::vector<double> smoothed = SgApply(run, spec);
        for (std::size_t i = t; i < end; ++i) {
          frames[i].angles[j] = smoothed[i - t];
        }
      }
      t = end;
    }
  }
  return AngleTrajectory(std::move(frames), trajectory.frame_rate());
}

}  // namespace imitate
