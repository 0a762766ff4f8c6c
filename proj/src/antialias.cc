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

#include "alias_scope/antialias.h"

#include <algorithm>
#include <limits>
#include <random>

#include "alias_scope/errors.h"

namespace alias_scope {

CutoffSpec::CutoffSpec(double cutoff) : cutoff_(cutoff) {
  if (!(cutoff > 0.0 && cutoff <= 0.5)) {
    throw ShapeError("cutoff " + std::to_string(cutoff) +
                     " outside (0, 1/2]");
  }
}

std::string_view ScoreModeName(ScoreMode mode) {
  return mode == ScoreMode::kGlobal ? "global" : "per_channel_mean";
}

ScoreMode ParseScoreMode(std::string_view name) {
  if (name == "per_channel_mean") return ScoreMode::kPerChannelMean;
  if (name == "global") return ScoreMode::kGlobal;
  throw ShapeError("unknown score mode '" + std::string(name) + "'");
}

BandPower ComputeBandPower(const Spectrum& spectrum, const CutoffSpec& cutoff) {
  const FreqGrid grid(spectrum.height(), spectrum.width());
  BandPower power;
  power.high.assign(spectrum.channels(), 0.0);
  power.total.assign(spectrum.channels(), 0.0);
  for (int c = 0; c < spectrum.channels(); ++c) {
    for (int k = 0; k < spectrum.height(); ++k) {
      for (int l = 0; l < spectrum.width(); ++l) {
        const double p = std::norm(spectrum.at(c, k, l));
        power.total[c] += p;
        if (cutoff.IsHigh(grid.k(k), grid.l(l))) power.high[c] += p;
      }
    }
  }
  return power;
}

BandPower ComputeBandPower(const FeatureTensor& f, const CutoffSpec& cutoff) {
  return ComputeBandPower(Fft2(f), cutoff);
}

std::vector<double> ChannelAliasingScores(const BandPower& power) {
  std::vector<double> scores(power.total.size());
  for (std::size_t c = 0; c < scores.size(); ++c) {
    scores[c] = power.total[c] > 0.0 ? power.high[c] / power.total[c]
                                     : std::numeric_limits<double>::quiet_NaN();
  }
  return scores;
}

double AliasingScore(const BandPower& power, ScoreMode mode) {
  if (mode == ScoreMode::kGlobal) {
    double high = 0.0, total = 0.0;
    for (std::size_t c = 0; c < power.total.size(); ++c) {
      high += power.high[c];
      total += power.total[c];
    }
    if (total <= 0.0) {
      throw UndefinedRatioError("aliasing score of an all-zero tensor");
    }
    return high / total;
  }
  double sum = 0.0;
  int counted = 0;
  for (double s : ChannelAliasingScores(power)) {
    if (std::isnan(s)) continue;
    sum += s;
    ++counted;
  }
  if (counted == 0) {
    throw UndefinedRatioError("aliasing score of an all-zero tensor");
  }
  return sum / counted;
}

double AliasingScore(const FeatureTensor& f, const CutoffSpec& cutoff,
                     ScoreMode mode) {
  return AliasingScore(ComputeBandPower(f, cutoff), mode);
}

DafResult DafWithResidue(const FeatureTensor& f, const CutoffSpec& cutoff) {
  Spectrum spectrum = Fft2(f);
  const FreqGrid grid(f.height(), f.width());
  for (int c = 0; c < spectrum.channels(); ++c) {
    for (int k = 0; k < spectrum.height(); ++k) {
      for (int l = 0; l < spectrum.width(); ++l) {
        if (cutoff.IsHigh(grid.k(k), grid.l(l))) spectrum.at(c, k, l) = 0.0;
      }
    }
  }
  const Spectrum back = Ifft2Complex(spectrum);
  std::vector<double> real(back.coeffs().size());
  double residue = 0.0;
  for (std::size_t i = 0; i < real.size(); ++i) {
    real[i] = back.coeffs()[i].real();
    residue = std::max(residue, std::abs(back.coeffs()[i].imag()));
  }
  double peak = 0.0;
  for (double v : f.data()) peak = std::max(peak, std::abs(v));
  if (residue > 1e-9 * peak) {
    throw InvariantError("de-aliasing left an imaginary residue of " +
                         std::to_string(residue));
  }
  return {FeatureTensor(f.channels(), f.height(), f.width(), std::move(real)),
          residue};
}

FeatureTensor Daf(const FeatureTensor& f, const CutoffSpec& cutoff) {
  return DafWithResidue(f, cutoff).output;
}

CutoffSpec FlcCutoff(int stride) {
  if (stride < 1) throw ShapeError("stride must be at least 1");
  return CutoffSpec(1.0 / (2.0 * stride));
}

std::vector<double> BinomialKernel1d(int size) {
  switch (size) {
    case 3:
      return {1 / 4.0, 2 / 4.0, 1 / 4.0};
    case 5:
      return {1 / 16.0, 4 / 16.0, 6 / 16.0, 4 / 16.0, 1 / 16.0};
    case 7:
      return {1 / 64.0,  6 / 64.0, 15 / 64.0, 20 / 64.0,
              15 / 64.0, 6 / 64.0, 1 / 64.0};
    default:
      throw ShapeError("binomial blur size must be 3, 5 or 7, got " +
                       std::to_string(size));
  }
}

RealMap BinomialKernel(int size) {
  const auto row = BinomialKernel1d(size);
  RealMap kernel(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) kernel.at(y, x) = row[y] * row[x];
  }
  return kernel;
}

std::string_view PaddingName(Padding padding) {
  return padding == Padding::kCircular ? "circular" : "reflect";
}

Padding ParsePadding(std::string_view name) {
  if (name == "reflect") return Padding::kReflect;
  if (name == "circular") return Padding::kCircular;
  throw ShapeError("unknown padding '" + std::string(name) + "'");
}

int PadIndex(int i, int n, Padding padding) {
  if (padding == Padding::kCircular) return ((i % n) + n) % n;
  if (n == 1) return 0;
  // Mirror without repeating the edge sample: -1 -> 1, n -> n - 2.
  const int period = 2 * (n - 1);
  i = ((i % period) + period) % period;
  return i < n ? i : period - i;
}

FeatureTensor BinomialBlur(const FeatureTensor& f, int size, Padding padding) {
  const auto taps = BinomialKernel1d(size);
  const int radius = size / 2;
  const int h = f.height();
  const int w = f.width();
  FeatureTensor rows(f.channels(), h, w);
  FeatureTensor out(f.channels(), h, w);
  for (int c = 0; c < f.channels(); ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int t = -radius; t <= radius; ++t) {
          acc += taps[t + radius] * f.at(c, y, PadIndex(x + t, w, padding));
        }
        rows.at(c, y, x) = acc;
      }
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int t = -radius; t <= radius; ++t) {
          acc += taps[t + radius] * rows.at(c, PadIndex(y + t, h, padding), x);
        }
        out.at(c, y, x) = acc;
      }
    }
  }
  return out;
}

FeatureTensor AddGaussianNoise(const FeatureTensor& f, double sigma,
                               std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ShapeError("noise sigma must be a finite value >= 0");
  }
  FeatureTensor out(f.channels(), f.height(), f.width(), f.data());
  if (sigma == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (double& v : out.data()) v += noise(rng);
  return out;
}

}  // namespace alias_scope
