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

// Reader and writer for the NPY v1.0 array container (little-endian, C order).

#ifndef ALIAS_SCOPE_NPY_H_
#define ALIAS_SCOPE_NPY_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "alias_scope/tensor.h"

namespace alias_scope {

// Untyped view of an NPY file. Every supported element type is exactly
// representable as a double, so values are widened on read and narrowed
// back on write without loss.
struct NpyArray {
  DType dtype = DType::kFloat64;
  std::vector<std::size_t> shape;
  std::vector<double> values;

  std::size_t element_count() const;
};

// Descriptor string ("<f4", "|u1", ...) for a dtype.
std::string DescrFor(DType dtype);

NpyArray ParseNpy(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> SerializeNpy(const NpyArray& array);

NpyArray ReadNpy(const std::filesystem::path& path);
void WriteNpy(const NpyArray& array, const std::filesystem::path& path);

using LoadedArray = std::variant<FeatureTensor, LabelMask>;

// 2D integer arrays become LabelMask, 2D floating arrays a single-channel
// FeatureTensor and 3D floating arrays a (C, H, W) FeatureTensor.
LoadedArray LoadArray(const std::filesystem::path& path,
                      std::optional<int> ignore_value = kDefaultIgnoreValue);
LoadedArray ToLoadedArray(const NpyArray& array,
                          std::optional<int> ignore_value = kDefaultIgnoreValue);

// Typed loaders; throw ShapeError when the file holds the other kind.
FeatureTensor LoadFeatureTensor(const std::filesystem::path& path);
LabelMask LoadLabelMask(const std::filesystem::path& path,
                        std::optional<int> ignore_value = kDefaultIgnoreValue);

NpyArray ToNpy(const FeatureTensor& tensor);
NpyArray ToNpy(const LabelMask& mask);
NpyArray ToNpy(const RealMap& map);

void SaveArray(const FeatureTensor& tensor, const std::filesystem::path& path);
void SaveArray(const LabelMask& mask, const std::filesystem::path& path);
void SaveArray(const RealMap& map, const std::filesystem::path& path);

}  // namespace alias_scope

#endif  // ALIAS_SCOPE_NPY_H_
