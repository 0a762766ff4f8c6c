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

#include "alias_scope/freqmix.h"

#include <cmath>
#include <limits>
#include <string>

#include "alias_scope/errors.h"
#include "alias_scope/npy.h"

namespace alias_scope {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckNotNan(const std::vector<double>& values, const char* name) {
  for (double v : values) {
    if (std::isnan(v)) throw ValidationError(std::string(name) + " holds NaN");
  }
}

NpyArray ReadField(const std::filesystem::path& dir, const std::string& name,
                   std::vector<std::size_t> expected_rank_shape) {
  NpyArray array = ReadNpy(dir / (name + ".npy"));
  if (!IsFloating(array.dtype)) {
    throw UnsupportedDtypeError(name + ".npy must hold floating values");
  }
  if (array.shape.size() != expected_rank_shape.size()) {
    throw ShapeError(name + ".npy has rank " +
                     std::to_string(array.shape.size()) + ", expected " +
                     std::to_string(expected_rank_shape.size()));
  }
  for (std::size_t i = 0; i < expected_rank_shape.size(); ++i) {
    if (expected_rank_shape[i] != 0 && array.shape[i] != expected_rank_shape[i]) {
      throw ShapeError(name + ".npy has an unexpected shape");
    }
  }
  CheckNotNan(array.values, name.c_str());
  return array;
}

RealMap ToRealMap(const NpyArray& array) {
  RealMap map(static_cast<int>(array.shape[0]), static_cast<int>(array.shape[1]));
  map.values = array.values;
  return map;
}

void WriteVector(const std::vector<double>& v, const std::filesystem::path& p) {
  WriteNpy({DType::kFloat64, {v.size()}, v}, p);
}

// Cross-correlation of a single map with a k x k kernel, reflect padded.
RealMap Correlate(const RealMap& map, const RealMap& kernel, double bias) {
  const int r = kernel.height / 2;
  RealMap out(map.height, map.width);
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      double acc = bias;
      for (int dy = -r; dy <= r; ++dy) {
        const int sy = PadIndex(y + dy, map.height, Padding::kReflect);
        for (int dx = -r; dx <= r; ++dx) {
          const int sx = PadIndex(x + dx, map.width, Padding::kReflect);
          acc += kernel.at(dy + r, dx + r) * map.at(sy, sx);
        }
      }
      out.at(y, x) = acc;
    }
  }
  return out;
}

}  // namespace

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

FreqMixWeights FreqMixWeights::Bypass(int channels, int height, int width) {
  return {std::vector<double>(channels, kInf),
          std::vector<double>(channels, kInf), RealMap(height, width, kInf),
          RealMap(height, width, kInf)};
}

FreqMixWeights FreqMixWeights::LowPassOnly(int channels, int height,
                                           int width) {
  return {std::vector<double>(channels, kInf),
          std::vector<double>(channels, -kInf), RealMap(height, width, kInf),
          RealMap(height, width, -kInf)};
}

void FreqMixWeights::Validate(const FeatureTensor& f) const {
  const auto c = static_cast<std::size_t>(f.channels());
  if (low_channel.size() != c || high_channel.size() != c) {
    throw ShapeError("channel weights must have length " + std::to_string(c));
  }
  for (const RealMap* map : {&low_spatial, &high_spatial}) {
    if (map->height != f.height() || map->width != f.width() ||
        map->values.size() != f.plane_size()) {
      throw ShapeError("spatial weights must be " + std::to_string(f.height()) +
                       "x" + std::to_string(f.width()));
    }
  }
  CheckNotNan(low_channel, "low_channel");
  CheckNotNan(high_channel, "high_channel");
  CheckNotNan(low_spatial.values, "low_spatial");
  CheckNotNan(high_spatial.values, "high_spatial");
}

FreqMixWeights FreqMixWeights::Load(const std::filesystem::path& dir) {
  FreqMixWeights w;
  w.low_channel = ReadField(dir, "low_channel", {0}).values;
  w.high_channel = ReadField(dir, "high_channel", {0}).values;
  w.low_spatial = ToRealMap(ReadField(dir, "low_spatial", {0, 0}));
  w.high_spatial = ToRealMap(ReadField(dir, "high_spatial", {0, 0}));
  return w;
}

void FreqMixWeights::Save(const std::filesystem::path& dir) const {
  WriteVector(low_channel, dir / "low_channel.npy");
  WriteVector(high_channel, dir / "high_channel.npy");
  WriteNpy(ToNpy(low_spatial), dir / "low_spatial.npy");
  WriteNpy(ToNpy(high_spatial), dir / "high_spatial.npy");
}

FreqMixParams FreqMixParams::Zeros(int channels, int kernel_size) {
  FreqMixParams p;
  p.channels = channels;
  p.kernel_size = kernel_size;
  const auto c = static_cast<std::size_t>(channels);
  p.fc_low_weight.assign(c * c, 0.0);
  p.fc_high_weight.assign(c * c, 0.0);
  p.fc_low_bias.assign(c, 0.0);
  p.fc_high_bias.assign(c, 0.0);
  p.conv_low_weight = RealMap(kernel_size, kernel_size);
  p.conv_high_weight = RealMap(kernel_size, kernel_size);
  p.Validate();
  return p;
}

void FreqMixParams::Validate() const {
  if (channels <= 0) throw ShapeError("parameter channel count must be positive");
  if (kernel_size <= 0 || kernel_size % 2 == 0) {
    throw ShapeError("spatial kernel size must be odd and positive");
  }
  const auto c = static_cast<std::size_t>(channels);
  if (fc_low_weight.size() != c * c || fc_high_weight.size() != c * c ||
      fc_low_bias.size() != c || fc_high_bias.size() != c) {
    throw ShapeError("fully connected parameters do not match " +
                     std::to_string(c) + " channels");
  }
  for (const RealMap* k : {&conv_low_weight, &conv_high_weight}) {
    if (k->height != kernel_size || k->width != kernel_size ||
        k->values.size() != static_cast<std::size_t>(kernel_size) * kernel_size) {
      throw ShapeError("spatial kernel does not match kernel_size");
    }
  }
  for (const auto* v : {&fc_low_weight, &fc_high_weight, &fc_low_bias,
                        &fc_high_bias, &conv_low_weight.values,
                        &conv_high_weight.values}) {
    for (double x : *v) {
      if (!std::isfinite(x)) throw ValidationError("non-finite parameter");
    }
  }
  if (!std::isfinite(conv_low_bias) || !std::isfinite(conv_high_bias)) {
    throw ValidationError("non-finite parameter");
  }
}

FreqMixParams FreqMixParams::Load(const std::filesystem::path& dir) {
  FreqMixParams p;
  const NpyArray fc_low = ReadField(dir, "fc_low_weight", {0, 0});
  p.channels = static_cast<int>(fc_low.shape[0]);
  const auto c = fc_low.shape[0];
  if (fc_low.shape[1] != c) throw ShapeError("fc_low_weight must be square");
  p.fc_low_weight = fc_low.values;
  p.fc_high_weight = ReadField(dir, "fc_high_weight", {c, c}).values;
  p.fc_low_bias = ReadField(dir, "fc_low_bias", {c}).values;
  p.fc_high_bias = ReadField(dir, "fc_high_bias", {c}).values;
  const NpyArray conv_low = ReadField(dir, "conv_low_weight", {0, 0});
  p.kernel_size = static_cast<int>(conv_low.shape[0]);
  const auto k = conv_low.shape[0];
  p.conv_low_weight = ToRealMap(conv_low);
  p.conv_high_weight = ToRealMap(ReadField(dir, "conv_high_weight", {k, k}));
  p.conv_low_bias = ReadField(dir, "conv_low_bias", {1}).values[0];
  p.conv_high_bias = ReadField(dir, "conv_high_bias", {1}).values[0];
  p.Validate();
  return p;
}

void FreqMixParams::Save(const std::filesystem::path& dir) const {
  const auto c = static_cast<std::size_t>(channels);
  WriteNpy({DType::kFloat64, {c, c}, fc_low_weight}, dir / "fc_low_weight.npy");
  WriteNpy({DType::kFloat64, {c, c}, fc_high_weight}, dir / "fc_high_weight.npy");
  WriteVector(fc_low_bias, dir / "fc_low_bias.npy");
  WriteVector(fc_high_bias, dir / "fc_high_bias.npy");
  WriteNpy(ToNpy(conv_low_weight), dir / "conv_low_weight.npy");
  WriteNpy(ToNpy(conv_high_weight), dir / "conv_high_weight.npy");
  WriteVector({conv_low_bias}, dir / "conv_low_bias.npy");
  WriteVector({conv_high_bias}, dir / "conv_high_bias.npy");
}

FrequencySplitResult FrequencySplit(const FeatureTensor& f,
                                    const CutoffSpec& cutoff) {
  FeatureTensor low = Daf(f, cutoff);
  std::vector<double> high(f.size());
  for (std::size_t i = 0; i < high.size(); ++i) {
    high[i] = f.data()[i] - low.data()[i];
  }
  return {std::move(low),
          FeatureTensor(f.channels(), f.height(), f.width(), std::move(high))};
}

FeatureTensor FreqMixCombine(const FrequencySplitResult& bands,
                             const FreqMixWeights& weights) {
  const FeatureTensor& low = bands.low;
  const FeatureTensor& high = bands.high;
  if (!low.SameShape(high)) throw ShapeError("band shapes differ");
  weights.Validate(low);
  FeatureTensor out(low.channels(), low.height(), low.width());
  const std::size_t plane = low.plane_size();
  std::vector<double> low_spatial(plane), high_spatial(plane);
  for (std::size_t i = 0; i < plane; ++i) {
    low_spatial[i] = Sigmoid(weights.low_spatial.values[i]);
    high_spatial[i] = Sigmoid(weights.high_spatial.values[i]);
  }
  for (int c = 0; c < low.channels(); ++c) {
    const double lc = Sigmoid(weights.low_channel[c]);
    const double hc = Sigmoid(weights.high_channel[c]);
    auto lo = low.channel(c);
    auto hi = high.channel(c);
    auto dst = out.channel(c);
    for (std::size_t i = 0; i < plane; ++i) {
      dst[i] = lc * low_spatial[i] * lo[i] + hc * high_spatial[i] * hi[i];
    }
  }
  return out;
}

FeatureTensor FreqMixApply(const FeatureTensor& f, const CutoffSpec& cutoff,
                           const FreqMixWeights& weights) {
  weights.Validate(f);
  return FreqMixCombine(FrequencySplit(f, cutoff), weights);
}

FreqMixWeights FreqMixPredictWeights(const FeatureTensor& f,
                                     const FreqMixParams& params) {
  params.Validate();
  if (params.channels != f.channels()) {
    throw ShapeError("parameters expect " + std::to_string(params.channels) +
                     " channels, tensor has " + std::to_string(f.channels()));
  }
  const int c_count = f.channels();
  const double plane = static_cast<double>(f.plane_size());
  std::vector<double> pooled(c_count, 0.0);
  for (int c = 0; c < c_count; ++c) {
    for (double v : f.channel(c)) pooled[c] += v;
    pooled[c] /= plane;
  }
  FreqMixWeights w;
  w.low_channel.assign(c_count, 0.0);
  w.high_channel.assign(c_count, 0.0);
  for (int o = 0; o < c_count; ++o) {
    double lo = params.fc_low_bias[o];
    double hi = params.fc_high_bias[o];
    for (int i = 0; i < c_count; ++i) {
      const std::size_t idx = static_cast<std::size_t>(o) * c_count + i;
      lo += params.fc_low_weight[idx] * pooled[i];
      hi += params.fc_high_weight[idx] * pooled[i];
    }
    w.low_channel[o] = lo;
    w.high_channel[o] = hi;
  }
  RealMap mean_map(f.height(), f.width());
  for (int c = 0; c < c_count; ++c) {
    auto src = f.channel(c);
    for (std::size_t i = 0; i < src.size(); ++i) mean_map.values[i] += src[i];
  }
  for (double& v : mean_map.values) v /= c_count;
  w.low_spatial = Correlate(mean_map, params.conv_low_weight, params.conv_low_bias);
  w.high_spatial =
      Correlate(mean_map, params.conv_high_weight, params.conv_high_bias);
  return w;
}

}  // namespace alias_scope
