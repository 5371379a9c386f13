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

#ifndef IMITATE_SAVGOL_H_
#define IMITATE_SAVGOL_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imitate/angles.h"

namespace imitate {

// What happens to the (window - 1) / 2 samples at each end, where the full
// window does not fit.
enum class EdgeMode {
  kCopy,    // pass the raw samples through
  kMirror,  // filter against a signal reflected about the end sample
};

std::string_view EdgeModeName(EdgeMode mode);
EdgeMode ParseEdgeMode(std::string_view name);

// Savitzky-Golay smoothing kernel. coefficients()[i] weights offset
// z = i - half_window().
class SgFilterSpec {
 public:
  int window() const { return window_; }
  int polyorder() const { return polyorder_; }
  int half_window() const { return (window_ - 1) / 2; }
  EdgeMode edge() const { return edge_; }
  const std::vector<double>& coefficients() const { return coefficients_; }

 private:
  friend SgFilterSpec SgCoefficients(int, int, EdgeMode);
  int window_ = 0;
  int polyorder_ = 0;
  EdgeMode edge_ = EdgeMode::kCopy;
  std::vector<double> coefficients_;
};

inline constexpr int kDefaultSgWindow = 7;
inline constexpr int kDefaultSgOrder = 2;

// Least-squares smoothing row: the estimator of the constant term of a
// degree-`polyorder` fit over offsets -(window-1)/2 .. (window-1)/2.
// Throws kUsage unless window is odd, >= 3 and > polyorder >= 0.
SgFilterSpec SgCoefficients(int window, int polyorder,
                            EdgeMode edge = EdgeMode::kCopy);

// Throws kData if the signal is shorter than the window.
std::vector<double> SgApply(std::span<const double> signal,
                            const SgFilterSpec& spec);

// Filters each joint channel independently. Invalid samples pass through
// untouched and split a channel into runs; runs shorter than the window are
// left as they are. Throws kData naming the joint if a channel has fewer
// valid samples than the window.
AngleTrajectory SmoothTrajectory(const AngleTrajectory& trajectory,
                                 const SgFilterSpec& spec);

}  // namespace imitate

#endif  // IMITATE_SAVGOL_H_
