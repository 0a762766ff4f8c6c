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

#include "alias_scope/spectral.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "alias_scope/errors.h"

namespace alias_scope {

namespace {

bool IsPowerOfTwo(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// exp(-2 pi i num / den) with the angle reduced to [0, 2 pi).
Complex UnitRoot(std::size_t num, std::size_t den) {
  const double angle = -2.0 * std::numbers::pi *
                       static_cast<double>(num % den) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

// Applies `transform` to every row and then every column of each channel.
template <typename Transform>
void Transform2d(Spectrum& s, const FftPlan& row_plan, const FftPlan& col_plan,
                 Transform transform) {
  const int h = s.height();
  const int w = s.width();
  std::vector<Complex> column(h);
  for (int c = 0; c < s.channels(); ++c) {
    auto plane = s.channel(c);
    for (int r = 0; r < h; ++r) {
      transform(row_plan, plane.subspan(static_cast<std::size_t>(r) * w, w));
    }
    for (int col = 0; col < w; ++col) {
      for (int r = 0; r < h; ++r) column[r] = plane[static_cast<std::size_t>(r) * w + col];
      transform(col_plan, std::span<Complex>(column));
      for (int r = 0; r < h; ++r) plane[static_cast<std::size_t>(r) * w + col] = column[r];
    }
  }
}

}  // namespace

double SignedFrequency(int index, int n) {
  if (2 * index <= n) return static_cast<double>(index) / n;
  return -static_cast<double>(n - index) / n;
}

FreqGrid::FreqGrid(int height, int width)
    : height_(height), width_(width), k_(height), l_(width) {
  for (int i = 0; i < height; ++i) k_[i] = SignedFrequency(i, height);
  for (int j = 0; j < width; ++j) l_[j] = SignedFrequency(j, width);
}

FftPlan::FftPlan(std::size_t n) : n_(n), power_of_two_(IsPowerOfTwo(n)) {
  if (n == 0) throw ShapeError("FFT length must be positive");
  if (power_of_two_) {
    twiddles_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) twiddles_[k] = UnitRoot(k, n);
    bit_reverse_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b) {
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      }
      bit_reverse_[i] = r;
    }
    return;
  }
  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;
  padded_ = std::make_unique<FftPlan>(m);
  chirp_.resize(n);
  // exp(-i pi k^2 / n) == UnitRoot(k^2, 2n); k^2 is reduced mod 2n first.
  for (std::size_t k = 0; k < n; ++k) chirp_[k] = UnitRoot((k * k) % (2 * n), 2 * n);
  chirp_filter_fft_.assign(m, Complex{});
  chirp_filter_fft_[0] = std::conj(chirp_[0]);
  for (std::size_t k = 1; k < n; ++k) {
    chirp_filter_fft_[k] = std::conj(chirp_[k]);
    chirp_filter_fft_[m - k] = std::conj(chirp_[k]);
  }
  padded_->Forward(chirp_filter_fft_);
}

void FftPlan::Forward(std::span<Complex> data) const {
  if (data.size() != n_) throw ShapeError("FFT input length mismatch");
  if (power_of_two_) {
    Radix2(data);
  } else {
    Bluestein(data);
  }
}

void FftPlan::Inverse(std::span<Complex> data) const {
  for (auto& x : data) x = std::conj(x);
  Forward(data);
  for (auto& x : data) x = std::conj(x);
}

void FftPlan::Radix2(std::span<Complex> data) const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (i < bit_reverse_[i]) std::swap(data[i], data[bit_reverse_[i]]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const Complex t = twiddles_[j * step] * data[start + j + half];
        data[start + j + half] = data[start + j] - t;
        data[start + j] += t;
      }
    }
  }
}

void FftPlan::Bluestein(std::span<Complex> data) const {
  const std::size_t m = padded_->size();
  std::vector<Complex> work(m);
  for (std::size_t k = 0; k < n_; ++k) work[k] = data[k] * chirp_[k];
  padded_->Forward(work);
  for (std::size_t k = 0; k < m; ++k) work[k] *= chirp_filter_fft_[k];
  padded_->Inverse(work);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n_; ++k) data[k] = chirp_[k] * work[k] * scale;
}

Spectrum Dft2Naive(const FeatureTensor& f) {
  const int h = f.height();
  const int w = f.width();
  Spectrum out(f.channels(), h, w);
  const double norm = 1.0 / (static_cast<double>(h) * w);
  std::vector<Complex> row_roots(h), col_roots(w);
  for (int i = 0; i < h; ++i) row_roots[i] = UnitRoot(i, h);
  for (int j = 0; j < w; ++j) col_roots[j] = UnitRoot(j, w);
  for (int c = 0; c < f.channels(); ++c) {
    for (int k = 0; k < h; ++k) {
      for (int l = 0; l < w; ++l) {
        Complex sum{};
        for (int y = 0; y < h; ++y) {
          const Complex ey = row_roots[(static_cast<std::size_t>(k) * y) % h];
          for (int x = 0; x < w; ++x) {
            sum += f.at(c, y, x) * ey *
                   col_roots[(static_cast<std::size_t>(l) * x) % w];
          }
        }
        out.at(c, k, l) = sum * norm;
      }
    }
  }
  return out;
}

Spectrum Fft2(const FeatureTensor& f) {
  Spectrum out(f.channels(), f.height(), f.width());
  std::transform(f.data().begin(), f.data().end(), out.coeffs().begin(),
                 [](double v) { return Complex(v, 0.0); });
  const FftPlan row_plan(f.width());
  const FftPlan col_plan(f.height());
  Transform2d(out, row_plan, col_plan,
              [](const FftPlan& plan, std::span<Complex> d) { plan.Forward(d); });
  const double norm = 1.0 / (static_cast<double>(f.height()) * f.width());
  for (auto& x : out.coeffs()) x *= norm;
  return out;
}

Spectrum Ifft2Complex(const Spectrum& spectrum) {
  Spectrum out = spectrum;
  const FftPlan row_plan(spectrum.width());
  const FftPlan col_plan(spectrum.height());
  Transform2d(out, row_plan, col_plan,
              [](const FftPlan& plan, std::span<Complex> d) { plan.Inverse(d); });
  return out;
}

FeatureTensor Ifft2(const Spectrum& spectrum) {
  const Spectrum complex_out = Ifft2Complex(spectrum);
  std::vector<double> real(complex_out.coeffs().size());
  std::transform(complex_out.coeffs().begin(), complex_out.coeffs().end(),
                 real.begin(), [](const Complex& x) { return x.real(); });
  return FeatureTensor(spectrum.channels(), spectrum.height(), spectrum.width(),
                       std::move(real));
}

FeatureTensor PowerSpectrum(const Spectrum& spectrum) {
  std::vector<double> power(spectrum.coeffs().size());
  std::transform(spectrum.coeffs().begin(), spectrum.coeffs().end(),
                 power.begin(), [](const Complex& x) { return std::norm(x); });
  return FeatureTensor(spectrum.channels(), spectrum.height(), spectrum.width(),
                       std::move(power));
}

RealMap FilterFrequencyResponse(const RealMap& kernel, int grid) {
  if (grid <= 0) throw ShapeError("response grid must be positive");
  if (kernel.height <= 0 || kernel.width <= 0) {
    throw ShapeError("kernel must be non-empty");
  }
  if (kernel.height > grid || kernel.width > grid) {
    throw ShapeError("kernel " + std::to_string(kernel.height) + "x" +
                     std::to_string(kernel.width) + " exceeds the " +
                     std::to_string(grid) + "x" + std::to_string(grid) +
                     " response grid");
  }
  Spectrum padded(1, grid, grid);
  for (int y = 0; y < kernel.height; ++y) {
    for (int x = 0; x < kernel.width; ++x) padded.at(0, y, x) = kernel.at(y, x);
  }
  const FftPlan plan(static_cast<std::size_t>(grid));
  Transform2d(padded, plan, plan,
              [](const FftPlan& p, std::span<Complex> d) { p.Forward(d); });
  RealMap response(grid, grid);
  const int shift = grid / 2;
  for (int k = 0; k < grid; ++k) {
    for (int l = 0; l < grid; ++l) {
      response.at((k + shift) % grid, (l + shift) % grid) =
          std::abs(padded.at(0, k, l));
    }
  }
  return response;
}

}  // namespace alias_scope
