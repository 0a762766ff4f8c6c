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

#ifndef ALIAS_SCOPE_ANTIALIAS_H_
#define ALIAS_SCOPE_ANTIALIAS_H_

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "alias_scope/spectral.h"
#include "alias_scope/tensor.h"

namespace alias_scope {

// Square frequency band: (k, l) is "high" iff |k| > cutoff or |l| > cutoff.
// Frequencies exactly at the cutoff are low.
class CutoffSpec {
 public:
  // Throws ShapeError unless 0 < cutoff <= 1/2.
  explicit CutoffSpec(double cutoff);

  double value() const { return cutoff_; }
  bool IsHigh(double k, double l) const {
    return std::abs(k) > cutoff_ || std::abs(l) > cutoff_;
  }

 private:
  double cutoff_;
};

enum class ScoreMode { kPerChannelMean, kGlobal };

std::string_view ScoreModeName(ScoreMode mode);
// Accepts "per_channel_mean" and "global"; throws ShapeError otherwise.
ScoreMode ParseScoreMode(std::string_view name);

// Spectral power above the cutoff and in total, per channel.
struct BandPower {
  std::vector<double> high;
  std::vector<double> total;
};

BandPower ComputeBandPower(const Spectrum& spectrum, const CutoffSpec& cutoff);
BandPower ComputeBandPower(const FeatureTensor& f, const CutoffSpec& cutoff);

// Fraction of spectral power above the cutoff. Per-channel mode averages the
// per-channel ratios over channels with nonzero power; global mode pools all
// channels. Throws UndefinedRatioError when the total power is zero.
double AliasingScore(const BandPower& power, ScoreMode mode);
double AliasingScore(const FeatureTensor& f, const CutoffSpec& cutoff,
                     ScoreMode mode = ScoreMode::kPerChannelMean);
// Per-channel ratios; NaN for a channel with no power.
std::vector<double> ChannelAliasingScores(const BandPower& power);

struct DafResult {
  FeatureTensor output;
  // Largest |imaginary part| left by the inverse transform.
  double max_imag_residue = 0.0;
};

// De-aliasing filter: zeroes every Fourier coefficient in the high band and
// transforms back. Throws InvariantError if the imaginary residue exceeds
// 1e-9 of the input's peak magnitude.
DafResult DafWithResidue(const FeatureTensor& f, const CutoffSpec& cutoff);
FeatureTensor Daf(const FeatureTensor& f, const CutoffSpec& cutoff);

// Stride-only cutoff 1 / (2 * stride).
CutoffSpec FlcCutoff(int stride);

// Normalized binomial row of length 3, 5 or 7.
std::vector<double> BinomialKernel1d(int size);
// Outer product of BinomialKernel1d with itself.
RealMap BinomialKernel(int size);

enum class Padding { kReflect, kCircular };

std::string_view PaddingName(Padding padding);
Padding ParsePadding(std::string_view name);

// Index into [0, n) for a possibly out-of-range coordinate.
int PadIndex(int i, int n, Padding padding);

// Depthwise separable binomial blur; output has the input's shape.
FeatureTensor BinomialBlur(const FeatureTensor& f, int size,
                           Padding padding = Padding::kReflect);

// f + N(0, sigma^2) per element, reproducible for a given seed.
FeatureTensor AddGaussianNoise(const FeatureTensor& f, double sigma,
                               std::uint64_t seed);

}  // namespace alias_scope

#endif  // ALIAS_SCOPE_ANTIALIAS_H_
