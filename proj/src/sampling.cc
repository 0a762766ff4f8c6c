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

#include "alias_scope/sampling.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "alias_scope/errors.h"

namespace alias_scope {

DownsampleSpec DownsampleSpec::FromStride(int kernel, int in_channels,
                                          int out_channels, int stride) {
  DownsampleSpec spec;
  spec.kernel_h = spec.kernel_w = kernel;
  spec.in_channels = in_channels;
  spec.out_channels = out_channels;
  spec.in_h = spec.in_w = stride;
  spec.out_h = spec.out_w = 1;
  return spec;
}

void DownsampleSpec::Validate() const {
  for (int v : {kernel_h, kernel_w, in_channels, out_channels, in_h, in_w,
                out_h, out_w}) {
    if (v <= 0) throw ShapeError("downsample spec fields must be positive");
  }
  if (out_h > in_h || out_w > in_w) {
    throw ShapeError("output size " + std::to_string(out_h) + "x" +
                     std::to_string(out_w) + " exceeds input size " +
                     std::to_string(in_h) + "x" + std::to_string(in_w));
  }
  if (in_h % out_h != 0 || in_w % out_w != 0) {
    throw ShapeError("input size " + std::to_string(in_h) + "x" +
                     std::to_string(in_w) + " is not an integral multiple of " +
                     std::to_string(out_h) + "x" + std::to_string(out_w));
  }
}

bool DownsampleSpec::KernelSmallerThanStride() const {
  return kernel_h < stride_h() || kernel_w < stride_w();
}

namespace {

double ChannelGain(const DownsampleSpec& spec, int kernel) {
  return std::min(static_cast<double>(kernel),
                  std::sqrt(static_cast<double>(spec.out_channels) /
                            spec.in_channels));
}

}  // namespace

double Esr(const DownsampleSpec& spec) {
  spec.Validate();
  const double area_ratio =
      (static_cast<double>(spec.out_h) * spec.out_w) /
      (static_cast<double>(spec.in_h) * spec.in_w);
  return ChannelGain(spec, std::min(spec.kernel_h, spec.kernel_w)) *
         std::sqrt(area_ratio);
}

AnisotropicEsr EsrAnisotropic(const DownsampleSpec& spec) {
  spec.Validate();
  return {ChannelGain(spec, spec.kernel_h) *
              (static_cast<double>(spec.out_h) / spec.in_h),
          ChannelGain(spec, spec.kernel_w) *
              (static_cast<double>(spec.out_w) / spec.in_w)};
}

double Nyquist(const DownsampleSpec& spec) {
  return std::min(Esr(spec) / 2.0, 0.5);
}

FeatureTensor Subsample(const FeatureTensor& f, int stride) {
  if (stride <= 0 || f.height() % stride != 0 || f.width() % stride != 0) {
    throw ShapeError("stride " + std::to_string(stride) +
                     " does not divide " + std::to_string(f.height()) + "x" +
                     std::to_string(f.width()));
  }
  FeatureTensor out(f.channels(), f.height() / stride, f.width() / stride);
  for (int c = 0; c < out.channels(); ++c) {
    for (int h = 0; h < out.height(); ++h) {
      for (int w = 0; w < out.width(); ++w) {
        out.at(c, h, w) = f.at(c, h * stride, w * stride);
      }
    }
  }
  return out;
}

FeatureTensor SpaceToDepth(const FeatureTensor& f, int block) {
  if (block <= 0 || f.height() % block != 0 || f.width() % block != 0) {
    throw ShapeError("block " + std::to_string(block) + " does not divide " +
                     std::to_string(f.height()) + "x" +
                     std::to_string(f.width()));
  }
  FeatureTensor out(f.channels() * block * block, f.height() / block,
                    f.width() / block);
  out.set_dtype(f.dtype());
  for (int c = 0; c < f.channels(); ++c) {
    for (int dy = 0; dy < block; ++dy) {
      for (int dx = 0; dx < block; ++dx) {
        const int oc = c * block * block + dy * block + dx;
        for (int h = 0; h < out.height(); ++h) {
          for (int w = 0; w < out.width(); ++w) {
            out.at(oc, h, w) = f.at(c, h * block + dy, w * block + dx);
          }
        }
      }
    }
  }
  return out;
}

FeatureTensor DepthToSpace(const FeatureTensor& f, int block) {
  if (block <= 0 || f.channels() % (block * block) != 0) {
    throw ShapeError("block " + std::to_string(block) +
                     " squared does not divide " +
                     std::to_string(f.channels()) + " channels");
  }
  FeatureTensor out(f.channels() / (block * block), f.height() * block,
                    f.width() * block);
  out.set_dtype(f.dtype());
  for (int c = 0; c < out.channels(); ++c) {
    for (int dy = 0; dy < block; ++dy) {
      for (int dx = 0; dx < block; ++dx) {
        const int ic = c * block * block + dy * block + dx;
        for (int h = 0; h < f.height(); ++h) {
          for (int w = 0; w < f.width(); ++w) {
            out.at(c, h * block + dy, w * block + dx) = f.at(ic, h, w);
          }
        }
      }
    }
  }
  return out;
}

double PredictedAliasFrequency(double k, int stride) {
  if (!(k >= 0.0 && k <= 0.5)) {
    throw ShapeError("tone frequency must lie in [0, 1/2]");
  }
  if (stride <= 0) throw ShapeError("stride must be positive");
  const double x = k * stride;
  const double m = x - std::floor(x);
  return std::min(m, 1.0 - m);
}

FilterBank FilterBank::FromNpy(const NpyArray& array) {
  if (array.shape.size() != 3 && array.shape.size() != 4) {
    throw ShapeError("filter banks must have shape (N, Kh, Kw) or "
                     "(N, C, Kh, Kw)");
  }
  const std::size_t count = array.shape[0];
  if (count == 0) throw ShapeError("filter bank is empty");
  const std::size_t length = array.element_count() / count;
  FilterBank bank;
  for (std::size_t i = 0; i < count; ++i) {
    bank.filters.emplace_back(array.values.begin() + i * length,
                              array.values.begin() + (i + 1) * length);
  }
  return bank;
}

FilterBank FilterBank::IdentityKernels(int block) {
  if (block <= 0) throw ShapeError("block must be positive");
  const std::size_t n = static_cast<std::size_t>(block) * block;
  FilterBank bank;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> filter(n, 0.0);
    filter[i] = 1.0;
    bank.filters.push_back(std::move(filter));
  }
  return bank;
}

OrthogonalityReport FilterBankOrthogonality(const FilterBank& bank) {
  const std::size_t n = bank.filters.size();
  if (n < 2) throw ShapeError("orthogonality needs at least two filters");
  const std::size_t length = bank.filters[0].size();
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = bank.filters[i];
    if (f.size() != length) throw ShapeError("filters differ in length");
    double sq = 0.0;
    for (double v : f) sq += v * v;
    if (sq == 0.0) {
      throw DegenerateFilterError("filter " + std::to_string(i) +
                                  " has zero norm");
    }
    norms[i] = std::sqrt(sq);
  }
  OrthogonalityReport report;
  report.similarity.assign(n, std::vector<double>(n, 1.0));
  double off_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t t = 0; t < length; ++t) {
        dot += bank.filters[i][t] * bank.filters[j][t];
      }
      // Rounding can push a parallel pair a hair above one.
      const double s = std::min(1.0, std::abs(dot) / (norms[i] * norms[j]));
      report.similarity[i][j] = report.similarity[j][i] = s;
      off_sum += 2.0 * s;
    }
  }
  report.mean_off_diagonal = off_sum / static_cast<double>(n * (n - 1));
  return report;
}

}  // namespace alias_scope
