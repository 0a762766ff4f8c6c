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

#include "alias_scope/tensor.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "alias_scope/errors.h"

namespace alias_scope {

bool IsFloating(DType dtype) {
  return dtype == DType::kFloat32 || dtype == DType::kFloat64;
}

FeatureTensor::FeatureTensor(int channels, int height, int width)
    : FeatureTensor(channels, height, width,
                    std::vector<double>(static_cast<std::size_t>(channels) *
                                        height * width)) {}

FeatureTensor::FeatureTensor(int channels, int height, int width,
                             std::vector<double> data, DType dtype)
    : channels_(channels),
      height_(height),
      width_(width),
      data_(std::move(data)),
      dtype_(dtype) {
  if (channels <= 0 || height <= 0 || width <= 0) {
    throw ShapeError("feature tensor dimensions must be positive, got " +
                     std::to_string(channels) + "x" + std::to_string(height) +
                     "x" + std::to_string(width));
  }
  if (data_.size() != static_cast<std::size_t>(channels) * height * width) {
    throw ShapeError("feature tensor data length " +
                     std::to_string(data_.size()) + " does not match shape");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw ValidationError("non-finite value at flat index " +
                            std::to_string(i));
    }
  }
}

LabelMask::LabelMask(int height, int width, std::vector<std::int32_t> labels,
                     std::optional<int> ignore_value, DType dtype)
    : height_(height),
      width_(width),
      labels_(std::move(labels)),
      ignore_value_(ignore_value),
      dtype_(dtype) {
  if (height <= 0 || width <= 0) {
    throw ShapeError("label mask dimensions must be positive");
  }
  if (labels_.size() != static_cast<std::size_t>(height) * width) {
    throw ShapeError("label mask data length does not match shape");
  }
  if (IsFloating(dtype)) {
    throw UnsupportedDtypeError("label masks need an integer dtype");
  }
  for (std::int32_t label : labels_) {
    if (label < 0) {
      throw ValidationError("negative label " + std::to_string(label));
    }
  }
}

void LabelMask::Validate(int num_classes) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (IsIgnored(i)) continue;
    if (labels_[i] >= num_classes) {
      throw ValidationError("label " + std::to_string(labels_[i]) +
                            " at flat index " + std::to_string(i) +
                            " is not below the class count " +
                            std::to_string(num_classes));
    }
  }
}

std::vector<int> LabelMask::PresentClasses() const {
  std::set<int> present;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!IsIgnored(i)) present.insert(labels_[i]);
  }
  return {present.begin(), present.end()};
}

BinaryMask::BinaryMask(int height, int width, std::vector<std::uint8_t> bits)
    : height_(height), width_(width), bits_(std::move(bits)) {
  if (bits_.size() != static_cast<std::size_t>(height) * width) {
    throw ShapeError("binary mask data length does not match shape");
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t BinaryMask::Count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

namespace {

template <typename Op>
BinaryMask Combine(const BinaryMask& a, const BinaryMask& b, Op op) {
  if (!a.SameShape(b)) throw ShapeError("binary mask shapes differ");
  BinaryMask out(a.height(), a.width());
  for (std::size_t i = 0; i < a.size(); ++i) out.set(i, op(a[i], b[i]));
  return out;
}

}  // namespace

BinaryMask BinaryMask::operator&(const BinaryMask& other) const {
  return Combine(*this, other, [](bool x, bool y) { return x && y; });
}

BinaryMask BinaryMask::operator|(const BinaryMask& other) const {
  return Combine(*this, other, [](bool x, bool y) { return x || y; });
}

BinaryMask BinaryMask::operator-(const BinaryMask& other) const {
  return Combine(*this, other, [](bool x, bool y) { return x && !y; });
}

BinaryMask ClassMask(const LabelMask& mask, int class_id) {
  BinaryMask out(mask.height(), mask.width());
  const auto& labels = mask.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out.set(i, !mask.IsIgnored(i) && labels[i] == class_id);
  }
  return out;
}

}  // namespace alias_scope
