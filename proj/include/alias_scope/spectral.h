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

// Two-dimensional discrete Fourier transforms with the forward transform
// normalized by 1/(H*W) and an unscaled inverse.

#ifndef ALIAS_SCOPE_SPECTRAL_H_
#define ALIAS_SCOPE_SPECTRAL_H_

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "alias_scope/tensor.h"

namespace alias_scope {

using Complex = std::complex<double>;

// Signed normalized frequency of bin `index` on an n-point grid: index/n for
// index <= n/2, otherwise -(n - index)/n. For even n the single bin at the
// grid edge is +1/2.
double SignedFrequency(int index, int n);

// Frequency lookup for an H x W spectrum.
class FreqGrid {
 public:
  FreqGrid(int height, int width);

  int height() const { return height_; }
  int width() const { return width_; }
  // Vertical frequency of row bin i and horizontal frequency of column bin j.
  double k(int i) const { return k_[i]; }
  double l(int j) const { return l_[j]; }

 private:
  int height_;
  int width_;
  std::vector<double> k_;
  std::vector<double> l_;
};

// Complex coefficients per (channel, row bin, column bin).
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(int channels, int height, int width)
      : channels_(channels),
        height_(height),
        width_(width),
        coeffs_(static_cast<std::size_t>(channels) * height * width) {}

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t plane_size() const {
    return static_cast<std::size_t>(height_) * width_;
  }

  Complex& at(int c, int k, int l) { return coeffs_[Index(c, k, l)]; }
  const Complex& at(int c, int k, int l) const { return coeffs_[Index(c, k, l)]; }
  std::span<Complex> channel(int c) {
    return {coeffs_.data() + c * plane_size(), plane_size()};
  }
  std::span<const Complex> channel(int c) const {
    return {coeffs_.data() + c * plane_size(), plane_size()};
  }
  std::vector<Complex>& coeffs() & { return coeffs_; }
  const std::vector<Complex>& coeffs() const& { return coeffs_; }
  std::vector<Complex> coeffs() && { return std::move(coeffs_); }

 private:
  std::size_t Index(int c, int k, int l) const {
    return (static_cast<std::size_t>(c) * height_ + k) * width_ + l;
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<Complex> coeffs_;
};

// Precomputed twiddles for an unnormalized 1D DFT of a fixed length. Powers of
// two use an iterative radix-2 transform; other lengths go through Bluestein's
// chirp-z reformulation on a padded power-of-two grid.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }
  // In place: X[k] = sum_j x[j] exp(-+2 pi i jk/n), sign by direction.
  void Forward(std::span<Complex> data) const;
  void Inverse(std::span<Complex> data) const;

 private:
  void Radix2(std::span<Complex> data) const;
  void Bluestein(std::span<Complex> data) const;

  std::size_t n_;
  bool power_of_two_;
  std::vector<Complex> twiddles_;  // exp(-2 pi i k / n_) for k < n_/2
  std::vector<std::size_t> bit_reverse_;
  // Bluestein state.
  std::vector<Complex> chirp_;
  std::vector<Complex> chirp_filter_fft_;
  std::unique_ptr<FftPlan> padded_;
};

// Direct evaluation of the double sum; the reference for Fft2.
Spectrum Dft2Naive(const FeatureTensor& f);

Spectrum Fft2(const FeatureTensor& f);
// Unscaled inverse with complex output, for callers that inspect the
// imaginary residue.
Spectrum Ifft2Complex(const Spectrum& spectrum);
// Real part of Ifft2Complex.
FeatureTensor Ifft2(const Spectrum& spectrum);

// |F|^2 per coefficient, shaped like the spectrum.
FeatureTensor PowerSpectrum(const Spectrum& spectrum);

// Magnitude of the unnormalized DFT of `kernel` zero-padded to grid x grid,
// shifted so that the zero frequency sits at (grid/2, grid/2). Throws
// ShapeError when the kernel exceeds the grid.
RealMap FilterFrequencyResponse(const RealMap& kernel, int grid);

}  // namespace alias_scope

#endif  // ALIAS_SCOPE_SPECTRAL_H_
