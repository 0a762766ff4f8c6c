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

#ifndef ALIAS_SCOPE_SAMPLING_H_
#define ALIAS_SCOPE_SAMPLING_H_

#include <cstddef>
#include <utility>
#include <vector>

#include "alias_scope/npy.h"
#include "alias_scope/tensor.h"

namespace alias_scope {

// Geometry of one downsampling layer: kernel extent, channel counts and the
// spatial sizes before and after the layer.
struct DownsampleSpec {
  int kernel_h = 1;
  int kernel_w = 1;
  int in_channels = 1;
  int out_channels = 1;
  int in_h = 1;
  int in_w = 1;
  int out_h = 1;
  int out_w = 1;

  // Square kernel, input size `stride` x `stride` reduced to 1 x 1. The rate
  // only depends on size ratios.
  static DownsampleSpec FromStride(int kernel, int in_channels,
                                   int out_channels, int stride);

  // Throws ShapeError on a non-positive field, out > in, or a non-integral
  // stride.
  void Validate() const;

  int stride_h() const { return in_h / out_h; }
  int stride_w() const { return in_w / out_w; }
  // True when the kernel is smaller than the stride along either axis, i.e.
  // the layer skips input pixels.
  bool KernelSmallerThanStride() const;
};

// Equivalent sampling rate
//   min(K, sqrt(C_out / C_in)) * sqrt((H_out W_out) / (H_in W_in))
// with K = min(kernel_h, kernel_w).
double Esr(const DownsampleSpec& spec);

struct AnisotropicEsr {
  double height;
  double width;
};

// Per-axis rates min(K_axis, sqrt(C_out / C_in)) * (out_axis / in_axis).
AnisotropicEsr EsrAnisotropic(const DownsampleSpec& spec);

// Half the equivalent sampling rate, clamped to the grid maximum 1/2.
double Nyquist(const DownsampleSpec& spec);

// Point-wise subsampling: out(c, h, w) = in(c, h * stride, w * stride).
FeatureTensor Subsample(const FeatureTensor& f, int stride);

// Rearranges each block x block patch into block^2 channels. Output channel
// c * block^2 + dy * block + dx holds in(c, h * block + dy, w * block + dx).
FeatureTensor SpaceToDepth(const FeatureTensor& f, int block);
FeatureTensor DepthToSpace(const FeatureTensor& f, int block);

// Frequency at which a tone of normalized frequency k in [0, 1/2] appears
// after keeping every stride-th sample.
double PredictedAliasFrequency(double k, int stride);

// Flattened filters of identical length.
struct FilterBank {
  std::vector<std::vector<double>> filters;

  // Accepts (N, K_h, K_w) or (N, C, K_h, K_w) arrays; each leading slice is
  // one filter.
  static FilterBank FromNpy(const NpyArray& array);
  // The block^2 one-hot block x block kernels that make space-to-depth a
  // strided convolution.
  static FilterBank IdentityKernels(int block);
};

struct OrthogonalityReport {
  // similarity[i][j] = |<f_i, f_j>| / (|f_i| |f_j|), unit diagonal.
  std::vector<std::vector<double>> similarity;
  double mean_off_diagonal = 0.0;
};

// Throws ShapeError for fewer than two filters or ragged lengths and
// DegenerateFilterError for a zero-norm filter.
OrthogonalityReport FilterBankOrthogonality(const FilterBank& bank);

}  // namespace alias_scope

#endif  // ALIAS_SCOPE_SAMPLING_H_
