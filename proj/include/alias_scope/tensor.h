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

#ifndef ALIAS_SCOPE_TENSOR_H_
#define ALIAS_SCOPE_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace alias_scope {

// Element types understood by the NPY reader and writer.
enum class DType { kFloat32, kFloat64, kUInt8, kInt32, kUInt16 };

bool IsFloating(DType dtype);

// Real-valued channel x height x width grid stored row-major. Values are held
// as doubles; `dtype` records the on-disk element type so that a tensor loaded
// from float32 saves back to identical bytes.
class FeatureTensor {
 public:
  FeatureTensor() = default;
  // Zero-filled tensor. Throws ShapeError on a zero dimension.
  FeatureTensor(int channels, int height, int width);
  // Throws ShapeError if data.size() != channels * height * width and
  // ValidationError if any element is not finite.
  FeatureTensor(int channels, int height, int width, std::vector<double> data,
                DType dtype = DType::kFloat64);

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t plane_size() const {
    return static_cast<std::size_t>(height_) * width_;
  }
  std::size_t size() const { return data_.size(); }
  DType dtype() const { return dtype_; }
  void set_dtype(DType dtype) { dtype_ = dtype; }

  double& at(int c, int h, int w) { return data_[Index(c, h, w)]; }
  double at(int c, int h, int w) const { return data_[Index(c, h, w)]; }

  std::span<double> channel(int c) {
    return {data_.data() + c * plane_size(), plane_size()};
  }
  std::span<const double> channel(int c) const {
    return {data_.data() + c * plane_size(), plane_size()};
  }

  std::vector<double>& data() & { return data_; }
  const std::vector<double>& data() const& { return data_; }
  // Moves out of a temporary so range-for over a returned tensor is safe.
  std::vector<double> data() && { return std::move(data_); }

  bool SameShape(const FeatureTensor& other) const {
    return channels_ == other.channels_ && height_ == other.height_ &&
           width_ == other.width_;
  }

 private:
  std::size_t Index(int c, int h, int w) const {
    return (static_cast<std::size_t>(c) * height_ + h) * width_ + w;
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
  DType dtype_ = DType::kFloat64;
};

// Height x width real map. NaN marks an undefined entry (for instance an
// ignored pixel in a cross-entropy map).
struct RealMap {
  RealMap() = default;
  RealMap(int h, int w, double fill = 0.0)
      : height(h), width(w), values(static_cast<std::size_t>(h) * w, fill) {}

  double& at(int h, int w) { return values[static_cast<std::size_t>(h) * width + w]; }
  double at(int h, int w) const {
    return values[static_cast<std::size_t>(h) * width + w];
  }

  int height = 0;
  int width = 0;
  std::vector<double> values;
};

inline constexpr int kDefaultIgnoreValue = 255;

// Integer label grid. Pixels equal to `ignore_value` carry no class.
class LabelMask {
 public:
  LabelMask() = default;
  // Throws ShapeError on size mismatch and ValidationError on negative labels.
  LabelMask(int height, int width, std::vector<std::int32_t> labels,
            std::optional<int> ignore_value = kDefaultIgnoreValue,
            DType dtype = DType::kInt32);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return labels_.size(); }
  std::optional<int> ignore_value() const { return ignore_value_; }
  void set_ignore_value(std::optional<int> value) { ignore_value_ = value; }
  DType dtype() const { return dtype_; }

  std::int32_t at(int h, int w) const {
    return labels_[static_cast<std::size_t>(h) * width_ + w];
  }
  const std::vector<std::int32_t>& labels() const { return labels_; }

  bool IsIgnored(std::size_t i) const {
    return ignore_value_.has_value() && labels_[i] == *ignore_value_;
  }

  // Throws ValidationError unless every non-ignored label is < num_classes.
  void Validate(int num_classes) const;

  // Sorted list of classes occurring among non-ignored pixels.
  std::vector<int> PresentClasses() const;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::int32_t> labels_;
  std::optional<int> ignore_value_ = kDefaultIgnoreValue;
  DType dtype_ = DType::kInt32;
};

// One boolean per pixel, stored as bytes for cheap indexing.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int height, int width, bool fill = false)
      : height_(height),
        width_(width),
        bits_(static_cast<std::size_t>(height) * width, fill ? 1 : 0) {}
  BinaryMask(int height, int width, std::vector<std::uint8_t> bits);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return bits_.size(); }

  bool at(int h, int w) const {
    return bits_[static_cast<std::size_t>(h) * width_ + w] != 0;
  }
  void set(int h, int w, bool value) {
    bits_[static_cast<std::size_t>(h) * width_ + w] = value ? 1 : 0;
  }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool value) { bits_[i] = value ? 1 : 0; }

  std::size_t Count() const;
  bool SameShape(const BinaryMask& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  BinaryMask operator&(const BinaryMask& other) const;
  BinaryMask operator|(const BinaryMask& other) const;
  // Set difference: this AND NOT other.
  BinaryMask operator-(const BinaryMask& other) const;
  bool operator==(const BinaryMask& other) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Pixels whose label equals `class_id`; ignored pixels are cleared.
BinaryMask ClassMask(const LabelMask& mask, int class_id);

}  // namespace alias_scope

#endif  // ALIAS_SCOPE_TENSOR_H_
