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

// Frequency mixing: split a feature map at a cutoff and recombine the two
// bands with separable channel x spatial weights. Forward evaluation only.

#ifndef ALIAS_SCOPE_FREQMIX_H_
#define ALIAS_SCOPE_FREQMIX_H_

#include <filesystem>
#include <utility>
#include <vector>

#include "alias_scope/antialias.h"
#include "alias_scope/tensor.h"

namespace alias_scope {

double Sigmoid(double x);

// Raw logits; the sigmoid is applied by FreqMixApply. Infinite logits are
// allowed and saturate to 0 or 1.
struct FreqMixWeights {
  std::vector<double> low_channel;   // length C
  std::vector<double> high_channel;  // length C
  RealMap low_spatial;               // H x W
  RealMap high_spatial;              // H x W

  // Both bands pass at full weight.
  static FreqMixWeights Bypass(int channels, int height, int width);
  // Low band at full weight, high band removed.
  static FreqMixWeights LowPassOnly(int channels, int height, int width);

  // Throws ShapeError if the fields do not match f, ValidationError on NaN.
  void Validate(const FeatureTensor& f) const;

  // Reads low_channel.npy, high_channel.npy, low_spatial.npy and
  // high_spatial.npy from `dir`.
  static FreqMixWeights Load(const std::filesystem::path& dir);
  void Save(const std::filesystem::path& dir) const;
};

// Weight predictor. Channel logits per band are fc_weight * pool(f) + fc_bias,
// where pool is the spatial mean; spatial logits per band are a k x k
// cross-correlation of the channel-mean map (reflect padded) plus a bias.
struct FreqMixParams {
  int channels = 0;
  int kernel_size = 3;
  std::vector<double> fc_low_weight;   // C x C, row-major (out, in)
  std::vector<double> fc_low_bias;     // C
  std::vector<double> fc_high_weight;  // C x C
  std::vector<double> fc_high_bias;    // C
  RealMap conv_low_weight;             // k x k
  double conv_low_bias = 0.0;
  RealMap conv_high_weight;            // k x k
  double conv_high_bias = 0.0;

  // All-zero parameters for C channels and an odd k x k spatial kernel.
  static FreqMixParams Zeros(int channels, int kernel_size = 3);

  void Validate() const;

  // Reads fc_{low,high}_{weight,bias}.npy and conv_{low,high}_{weight,bias}.npy
  // from `dir`.
  static FreqMixParams Load(const std::filesystem::path& dir);
  void Save(const std::filesystem::path& dir) const;
};

struct FrequencySplitResult {
  FeatureTensor low;
  FeatureTensor high;
};

// low = Daf(f, cutoff), high = f - low.
FrequencySplitResult FrequencySplit(const FeatureTensor& f,
                                    const CutoffSpec& cutoff);

// f' = s(a_lc[c]) s(a_ls[h,w]) f_low + s(a_hc[c]) s(a_hs[h,w]) f_high.
FeatureTensor FreqMixApply(const FeatureTensor& f, const CutoffSpec& cutoff,
                           const FreqMixWeights& weights);
// Same combination on an existing split.
FeatureTensor FreqMixCombine(const FrequencySplitResult& bands,
                             const FreqMixWeights& weights);

FreqMixWeights FreqMixPredictWeights(const FeatureTensor& f,
                                     const FreqMixParams& params);

}  // namespace alias_scope

#endif  // ALIAS_SCOPE_FREQMIX_H_
