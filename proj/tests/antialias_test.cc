/* Copyright 2026 The alias_scope Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "alias_scope/antialias.h"
#include "alias_scope/errors.h"
#include "alias_scope/sampling.h"
#include "alias_scope/spectral.h"
#include "test_util.h"

namespace alias_scope {
namespace {

using testing::Constant;
using testing::MaxRelError;
using testing::PinkField;
using testing::RandomTensor;
using testing::Tone;

double L2(const FeatureTensor& f) {
  double s = 0.0;
  for (double v : f.data()) s += v * v;
  return std::sqrt(s);
}

double MaxAbsDiff(const FeatureTensor& a, const FeatureTensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

TEST(CutoffSpecTest, Bounds) {
  EXPECT_THROW(CutoffSpec(0.0), ShapeError);
  EXPECT_THROW(CutoffSpec(0.51), ShapeError);
  EXPECT_NO_THROW(CutoffSpec(0.5));
  const CutoffSpec c(0.25);
  EXPECT_FALSE(c.IsHigh(0.25, -0.25));
  EXPECT_TRUE(c.IsHigh(0.0, -0.3));
  EXPECT_TRUE(c.IsHigh(0.26, 0.0));
}

TEST(AliasingScoreTest, ConstantScoresZero) {
  EXPECT_EQ(AliasingScore(Constant(2, 8, 8, 1.5), CutoffSpec(0.25)), 0.0);
}

TEST(AliasingScoreTest, HighToneScoresOne) {
  const FeatureTensor f = Tone(1, 16, 16, 0.0, 6.0 / 16);
  EXPECT_NEAR(AliasingScore(f, CutoffSpec(0.25)), 1.0, 1e-12);
  EXPECT_NEAR(AliasingScore(f, CutoffSpec(0.25), ScoreMode::kGlobal), 1.0, 1e-12);
}

TEST(AliasingScoreTest, ZeroTensorIsUndefined) {
  EXPECT_THROW(AliasingScore(FeatureTensor(1, 4, 4), CutoffSpec(0.25)),
               UndefinedRatioError);
  EXPECT_THROW(
      AliasingScore(FeatureTensor(1, 4, 4), CutoffSpec(0.25), ScoreMode::kGlobal),
      UndefinedRatioError);
}

// Channel 0 is a pure high tone (ratio 1), channel 1 a constant with twice
// its power (ratio 0): the channel mean is 1/2, the pooled ratio 1/3.
TEST(AliasingScoreTest, ModesDiffer) {
  FeatureTensor f(2, 16, 16);
  const FeatureTensor tone = Tone(1, 16, 16, 0.0, 6.0 / 16);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      f.at(0, y, x) = tone.at(0, y, x);
      f.at(1, y, x) = 1.0;
    }
  }
  // Tone power: 2 * (1/2)^2 = 1/2; constant power: 1.
  EXPECT_NEAR(AliasingScore(f, CutoffSpec(0.25)), 0.5, 1e-12);
  EXPECT_NEAR(AliasingScore(f, CutoffSpec(0.25), ScoreMode::kGlobal), 1.0 / 3,
              1e-12);
}

TEST(AliasingScoreTest, ZeroChannelIsSkippedInChannelMean) {
  FeatureTensor f(2, 16, 16);
  const FeatureTensor tone = Tone(1, 16, 16, 0.0, 6.0 / 16);
  std::copy(tone.data().begin(), tone.data().end(), f.data().begin());
  EXPECT_NEAR(AliasingScore(f, CutoffSpec(0.25)), 1.0, 1e-12);
}

TEST(DafTest, ConstantUnchanged) {
  const FeatureTensor f = Constant(1, 8, 8, 3.0);
  EXPECT_LT(MaxAbsDiff(Daf(f, CutoffSpec(0.1)), f), 1e-12);
}

TEST(DafTest, LowToneUnchangedHighToneRemoved) {
  const FeatureTensor low = Tone(1, 16, 16, 0.0, 2.0 / 16);
  EXPECT_LT(MaxAbsDiff(Daf(low, CutoffSpec(0.25)), low), 1e-9);
  const FeatureTensor high = Tone(1, 16, 16, 0.0, 6.0 / 16);
  for (double v : Daf(high, CutoffSpec(0.25)).data()) EXPECT_NEAR(v, 0.0, 1e-9);
}

TEST(DafTest, CutoffIsInclusiveOfBoundaryBin) {
  // 4/16 sits exactly on the cutoff and survives.
  const FeatureTensor edge = Tone(1, 16, 16, 4.0 / 16, 0.0);
  EXPECT_LT(MaxAbsDiff(Daf(edge, CutoffSpec(0.25)), edge), 1e-9);
}

TEST(DafTest, ProjectionProperties) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int h = 5 + static_cast<int>(seed % 7), w = 6 + static_cast<int>(seed % 5);
    const FeatureTensor f = RandomTensor(2, h, w, seed);
    for (double c : {0.125, 0.25, std::sqrt(2.0) / 4, 0.5}) {
      const CutoffSpec cutoff(c);
      const DafResult once = DafWithResidue(f, cutoff);
      EXPECT_LT(once.max_imag_residue, 1e-9);
      EXPECT_LT(AliasingScore(once.output, cutoff), 1e-12);
      EXPECT_LT(MaxAbsDiff(Daf(once.output, cutoff), once.output), 1e-9);
      EXPECT_LE(L2(once.output), L2(f) * (1 + 1e-12));
    }
  }
}

TEST(DafTest, Linear) {
  const FeatureTensor f = RandomTensor(1, 12, 10, 1);
  const FeatureTensor g = RandomTensor(1, 12, 10, 2);
  FeatureTensor sum(1, 12, 10);
  for (std::size_t i = 0; i < sum.size(); ++i) {
    sum.data()[i] = 2.0 * f.data()[i] - g.data()[i];
  }
  const CutoffSpec c(0.2);
  const FeatureTensor df = Daf(f, c), dg = Daf(g, c), ds = Daf(sum, c);
  for (std::size_t i = 0; i < sum.size(); ++i) {
    EXPECT_NEAR(ds.data()[i], 2.0 * df.data()[i] - dg.data()[i], 1e-12);
  }
}

// A tone below 1/(2s) survives subsampling untouched; a tone above it folds,
// and the de-aliased signal no longer carries the folded component.
TEST(DafTest, SubsamplingSafety) {
  const int s = 2;
  const CutoffSpec cutoff = FlcCutoff(s);
  const FeatureTensor low = Tone(1, 32, 32, 0.0, 3.0 / 32);
  const FeatureTensor low_sub = Subsample(Daf(low, cutoff), s);
  EXPECT_LT(MaxAbsDiff(low_sub, Subsample(low, s)), 1e-9);
  EXPECT_NEAR(std::abs(Fft2(low_sub).at(0, 0, 3)), 0.5, 1e-9);

  const double k = 13.0 / 32;
  const FeatureTensor high = Tone(1, 32, 32, 0.0, k);
  const double folded = PredictedAliasFrequency(k, s);
  const int bin = static_cast<int>(std::lround(folded * 16));
  EXPECT_NEAR(std::abs(Fft2(Subsample(high, s)).at(0, 0, bin)), 0.5, 1e-9);
  EXPECT_LT(std::abs(Fft2(Subsample(Daf(high, cutoff), s)).at(0, 0, bin)), 1e-9);
}

TEST(FlcCutoffTest, Values) {
  EXPECT_EQ(FlcCutoff(2).value(), 0.25);
  EXPECT_EQ(FlcCutoff(1).value(), 0.5);
  EXPECT_EQ(FlcCutoff(4).value(), 0.125);
  EXPECT_THROW(FlcCutoff(0), ShapeError);
}

TEST(BinomialTest, Kernels) {
  EXPECT_EQ(BinomialKernel(3).at(1, 1), 0.25);
  for (int size : {3, 5, 7}) {
    double sum = 0.0;
    for (double v : BinomialKernel(size).values) sum += v;
    EXPECT_DOUBLE_EQ(sum, 1.0);
  }
  EXPECT_THROW(BinomialKernel1d(4), ShapeError);
}

TEST(BinomialTest, ConstantPreserved) {
  for (Padding p : {Padding::kReflect, Padding::kCircular}) {
    for (int size : {3, 5, 7}) {
      for (double v : BinomialBlur(Constant(2, 5, 9, 2.0), size, p).data()) {
        EXPECT_NEAR(v, 2.0, 1e-12);
      }
    }
  }
}

TEST(BinomialTest, PadIndex) {
  EXPECT_EQ(PadIndex(-1, 5, Padding::kReflect), 1);
  EXPECT_EQ(PadIndex(-3, 5, Padding::kReflect), 3);
  EXPECT_EQ(PadIndex(5, 5, Padding::kReflect), 3);
  EXPECT_EQ(PadIndex(-1, 5, Padding::kCircular), 4);
  EXPECT_EQ(PadIndex(7, 2, Padding::kReflect), 1);
  EXPECT_EQ(PadIndex(-2, 1, Padding::kReflect), 0);
}

// Circular padding keeps each channel mean; reflect padding only keeps
// constants.
TEST(BinomialTest, CircularBlurPreservesMean) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const FeatureTensor f = RandomTensor(3, 7, 11, seed);
    const FeatureTensor g = BinomialBlur(f, 5, Padding::kCircular);
    for (int c = 0; c < 3; ++c) {
      double a = 0.0, b = 0.0;
      for (double v : f.channel(c)) a += v;
      for (double v : g.channel(c)) b += v;
      EXPECT_NEAR(a / 77, b / 77, 1e-9);
    }
  }
}

TEST(BinomialTest, WhiteNoiseScoreDrops) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const FeatureTensor f = RandomTensor(2, 32, 32, seed);
    const CutoffSpec c(0.25);
    EXPECT_LT(AliasingScore(BinomialBlur(f, 3), c), AliasingScore(f, c));
  }
}

TEST(NoiseTest, ZeroSigmaAndDeterminism) {
  const FeatureTensor f = RandomTensor(1, 6, 6, 4);
  EXPECT_EQ(AddGaussianNoise(f, 0.0, 3).data(), f.data());
  EXPECT_EQ(AddGaussianNoise(f, 0.5, 3).data(), AddGaussianNoise(f, 0.5, 3).data());
  EXPECT_NE(AddGaussianNoise(f, 0.5, 3).data(), AddGaussianNoise(f, 0.5, 4).data());
  EXPECT_THROW(AddGaussianNoise(f, -1.0, 3), ShapeError);
}

TEST(NoiseTest, NoiseRaisesScoreOfPinkField) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const FeatureTensor f = PinkField(1, 32, 32, seed);
    const CutoffSpec c(0.25);
    EXPECT_LT(AliasingScore(f, c), AliasingScore(AddGaussianNoise(f, 10.0, seed), c));
  }
}

}  // namespace
}  // namespace alias_scope
