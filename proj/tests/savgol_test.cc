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


#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "imitate/error.h"
#include "imitate/savgol.h"
#include "oracles.h"

namespace imitate {
namespace {

TEST(SgCoefficients, MovingAverageForOrderZero) {
  const SgFilterSpec spec = SgCoefficients(5, 0);
  for (double c : spec.coefficients()) EXPECT_NEAR(c, 0.2, 1e-12);
}

TEST(SgCoefficients, FivePointQuadratic) {
  const double expected[] = {-3, 12, 17, 12, -3};
  const SgFilterSpec spec = SgCoefficients(5, 2);
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(spec.coefficients()[i], expected[i] / 35.0, 1e-9);
  }
}

TEST(SgCoefficients, SevenPointQuadratic) {
  const double expected[] = {-2, 3, 6, 7, 6, 3, -2};
  const SgFilterSpec spec = SgCoefficients(7, 2);
  for (int i = 0; i < 7; ++i) {
    EXPECT_NEAR(spec.coefficients()[i], expected[i] / 21.0, 1e-9);
  }
}

TEST(SgCoefficients, MatchExactOracleUpToElevenTaps) {
  for (int k = 3; k <= 11; k += 2) {
    for (int order = 0; order < k; ++order) {
      const std::vector<oracle::Rational> exact = oracle::ExactSgRow(k, order);
      const SgFilterSpec spec = SgCoefficients(k, order);
      double sum = 0.0;
      for (int i = 0; i < k; ++i) {
        EXPECT_NEAR(spec.coefficients()[i], oracle::ToDouble(exact[i]), 1e-9)
            << "k=" << k << " order=" << order << " i=" << i;
        EXPECT_NEAR(spec.coefficients()[i], spec.coefficients()[k - 1 - i],
                    1e-12);
        sum += spec.coefficients()[i];
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(SgCoefficients, RejectsBadParameters) {
  for (auto [k, order] : {std::pair{4, 2}, {1, 0}, {5, 5}, {5, -1}, {3, 7}}) {
    try {
      SgCoefficients(k, order);
      FAIL() << k << "/" << order;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kUsage);
    }
  }
}

TEST(SgApply, ConstantAndRampUnchanged) {
  const SgFilterSpec spec = SgCoefficients(5, 2);
  const std::vector<double> flat(7, 5.0);
  const std::vector<double> ramp = {0, 1, 2, 3, 4, 5, 6};
  const std::vector<double> a = SgApply(flat, spec);
  const std::vector<double> b = SgApply(ramp, spec);
  for (int i = 0; i < 7; ++i) {
    EXPECT_NEAR(a[i], 5.0, 1e-12);
    EXPECT_NEAR(b[i], ramp[i], 1e-12);
  }
}

TEST(SgApply, ImpulseRevealsCoefficients) {
  std::vector<double> impulse(11, 0.0);
  impulse[5] = 1.0;
  const std::vector<double> out = SgApply(impulse, SgCoefficients(5, 2));
  const double expected[] = {-3, 12, 17, 12, -3};
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(out[3 + i], expected[i] / 35.0, 1e-12);
  }
  EXPECT_EQ(out[0], 0.0);
  EXPECT_EQ(out[10], 0.0);
}

TEST(SgApply, TooShortSignal) {
  const std::vector<double> s(4, 1.0);
  EXPECT_THROW(SgApply(s, SgCoefficients(5, 2)), Error);
}

TEST(SgApply, CopyModeKeepsEdgesRaw) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> s(20);
  for (double& v : s) v = u(rng);
  const std::vector<double> out = SgApply(s, SgCoefficients(7, 2));
  for (int i : {0, 1, 2, 17, 18, 19}) EXPECT_EQ(out[i], s[i]);
}

TEST(SgApply, PolynomialReproduction) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 3; k <= 11; k += 2) {
    for (int order = 0; order < k; ++order) {
      for (EdgeMode edge : {EdgeMode::kCopy, EdgeMode::kMirror}) {
        std::vector<double> coef(order + 1);
        for (double& c : coef) c = u(rng);
        std::vector<double> s(30);
        for (int t = 0; t < 30; ++t) {
          const double x = (t - 15) / 15.0;
          double v = 0.0;
          for (int p = order; p >= 0; --p) v = v * x + coef[p];
          s[t] = v;
        }
        const std::vector<double> out =
            SgApply(s, SgCoefficients(k, order, edge));
        const int h = (k - 1) / 2;
        for (int t = h; t < 30 - h; ++t) EXPECT_NEAR(out[t], s[t], 1e-9);
      }
    }
  }
}

TEST(SgApply, LinearityAndShift) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  const SgFilterSpec spec = SgCoefficients(9, 3, EdgeMode::kMirror);
  std::vector<double> f(40), g(40), mix(40);
  for (int t = 0; t < 40; ++t) {
    f[t] = u(rng);
    g[t] = u(rng);
    mix[t] = 2.5 * f[t] - 0.75 * g[t];
  }
  const std::vector<double> sf = SgApply(f, spec);
  const std::vector<double> sg = SgApply(g, spec);
  const std::vector<double> sm = SgApply(mix, spec);
  for (int t = 0; t < 40; ++t) {
    EXPECT_NEAR(sm[t], 2.5 * sf[t] - 0.75 * sg[t], 1e-10);
  }
  std::vector<double> shifted(f.begin() + 3, f.end());
  const std::vector<double> ss = SgApply(shifted, spec);
  for (int t = 4; t + 4 < static_cast<int>(shifted.size()); ++t) {
    EXPECT_NEAR(ss[t], sf[t + 3], 1e-12);
  }
}

TEST(SgApply, MirrorModeReflectsAboutEndSample) {
  const SgFilterSpec spec = SgCoefficients(5, 2, EdgeMode::kMirror);
  const std::vector<double> s = {1, 4, 2, 8, 5, 7};
  const std::vector<double> out = SgApply(s, spec);
  const double c[] = {-3 / 35.0, 12 / 35.0, 17 / 35.0, 12 / 35.0, -3 / 35.0};
  const double padded0[] = {2, 4, 1, 4, 2};
  double expect0 = 0.0;
  for (int i = 0; i < 5; ++i) expect0 += c[i] * padded0[i];
  EXPECT_NEAR(out[0], expect0, 1e-12);
  const double padded5[] = {8, 5, 7, 5, 8};
  double expect5 = 0.0;
  for (int i = 0; i < 5; ++i) expect5 += c[i] * padded5[i];
  EXPECT_NEAR(out[5], expect5, 1e-12);
}

AngleTrajectory FromChannels(const std::vector<std::vector<double>>& ch) {
  std::vector<AngleFrame> frames(ch[0].size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    for (int j = 0; j < kJointCount; ++j) {
      frames[t].angles[j] = ch[j][t];
      frames[t].valid[j] = true;
    }
  }
  return AngleTrajectory(frames, 30.0);
}

TEST(SmoothTrajectory, ConstantAndQuadraticUnchanged) {
  std::vector<std::vector<double>> ch(kJointCount, std::vector<double>(25));
  for (int j = 0; j < kJointCount; ++j) {
    for (int t = 0; t < 25; ++t) {
      ch[j][t] = 0.01 * j * t * t - 0.2 * t + j;
    }
  }
  const AngleTrajectory traj = FromChannels(ch);
  const AngleTrajectory out = SmoothTrajectory(traj, SgCoefficients(7, 2));
  for (std::size_t t = 0; t < traj.size(); ++t) {
    for (int j = 0; j < kJointCount; ++j) {
      EXPECT_NEAR(out[t].angles[j], traj[t].angles[j], 1e-9);
      EXPECT_TRUE(out[t].valid[j]);
    }
  }
}

TEST(SmoothTrajectory, ReducesNoiseOnSine) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> noise(-0.3, 0.3);
  const int n = 200;
  std::vector<double> clean(n);
  std::vector<std::vector<double>> ch(kJointCount, std::vector<double>(n));
  for (int t = 0; t < n; ++t) {
    clean[t] = std::sin(2 * std::numbers::pi * t / 50.0);
    for (int j = 0; j < kJointCount; ++j) ch[j][t] = clean[t] + noise(rng);
  }
  const AngleTrajectory out =
      SmoothTrajectory(FromChannels(ch), SgCoefficients(9, 3));
  for (int j = 0; j < kJointCount; ++j) {
    double raw = 0.0, smooth = 0.0;
    for (int t = 0; t < n; ++t) {
      raw += std::pow(ch[j][t] - clean[t], 2);
      smooth += std::pow(out[t].angles[j] - clean[t], 2);
    }
    EXPECT_LT(smooth, raw);
  }
}

TEST(SmoothTrajectory, ShortChannelNamesJoint) {
  std::vector<std::vector<double>> ch(kJointCount, std::vector<double>(10, 0));
  AngleTrajectory traj = FromChannels(ch);
  std::vector<AngleFrame> frames = traj.frames();
  for (int t = 0; t < 5; ++t) frames[t].valid[6] = false;
  try {
    SmoothTrajectory(AngleTrajectory(frames, 30.0), SgCoefficients(7, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
    EXPECT_NE(std::string(e.what()).find("r-knee"), std::string::npos)
        << e.what();
  }
}

TEST(SmoothTrajectory, InvalidSamplesKeepTheirFlags) {
  std::vector<std::vector<double>> ch(kJointCount, std::vector<double>(30));
  for (int j = 0; j < kJointCount; ++j) {
    for (int t = 0; t < 30; ++t) ch[j][t] = 0.1 * t;
  }
  std::vector<AngleFrame> frames = FromChannels(ch).frames();
  frames[15].valid[2] = false;
  const AngleTrajectory out =
      SmoothTrajectory(AngleTrajectory(frames, 30.0), SgCoefficients(5, 2));
  EXPECT_FALSE(out[15].valid[2]);
  EXPECT_TRUE(out[16].valid[2]);
}

}  // namespace
}  // namespace imitate
