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

#include "alias_scope/npy.h"

#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <string_view>

#include "alias_scope/errors.h"

namespace alias_scope {

static_assert(std::endian::native == std::endian::little,
              "NPY I/O assumes a little-endian host");

namespace {

constexpr std::uint8_t kMagic[] = {0x93, 'N', 'U', 'M', 'P', 'Y'};
constexpr std::size_t kPreambleSize = 10;  // magic + version + header length

std::size_t ItemSize(DType dtype) {
  switch (dtype) {
    case DType::kFloat32:
    case DType::kInt32:
      return 4;
    case DType::kFloat64:
      return 8;
    case DType::kUInt8:
      return 1;
    case DType::kUInt16:
      return 2;
  }
  return 0;
}

DType DTypeFromDescr(std::string_view descr) {
  if (descr == "<f4") return DType::kFloat32;
  if (descr == "<f8") return DType::kFloat64;
  if (descr == "|u1") return DType::kUInt8;
  if (descr == "<i4") return DType::kInt32;
  if (descr == "<u2") return DType::kUInt16;
  throw UnsupportedDtypeError("unsupported NPY dtype '" + std::string(descr) +
                              "'");
}

// Minimal parser for the Python dict literal in an NPY header.
class HeaderParser {
 public:
  explicit HeaderParser(std::string_view text) : text_(text) {}

  struct Header {
    std::string descr;
    bool fortran_order = false;
    std::vector<std::size_t> shape;
  };

  Header Parse() {
    Header header;
    bool has_descr = false, has_order = false, has_shape = false;
    Expect('{');
    SkipSpace();
    while (Peek() != '}') {
      std::string key = ParseString();
      Expect(':');
      SkipSpace();
      if (key == "descr") {
        header.descr = ParseString();
        has_descr = true;
      } else if (key == "fortran_order") {
        header.fortran_order = ParseBool();
        has_order = true;
      } else if (key == "shape") {
        header.shape = ParseShape();
        has_shape = true;
      } else {
        throw FormatError("unexpected NPY header key '" + key + "'");
      }
      SkipSpace();
      if (Peek() == ',') {
        ++pos_;
        SkipSpace();
      } else if (Peek() != '}') {
        throw FormatError("expected ',' or '}' in NPY header");
      }
    }
    if (!has_descr || !has_order || !has_shape) {
      throw FormatError("NPY header is missing descr, fortran_order or shape");
    }
    return header;
  }

 private:
  char Peek() const {
    if (pos_ >= text_.size()) throw FormatError("truncated NPY header dict");
    return text_[pos_];
  }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  void Expect(char c) {
    SkipSpace();
    if (Peek() != c) {
      throw FormatError(std::string("expected '") + c + "' in NPY header");
    }
    ++pos_;
  }

  std::string ParseString() {
    SkipSpace();
    char quote = Peek();
    if (quote != '\'' && quote != '"') {
      throw FormatError("expected a quoted string in NPY header");
    }
    ++pos_;
    std::size_t end = text_.find(quote, pos_);
    if (end == std::string_view::npos) {
      throw FormatError("unterminated string in NPY header");
    }
    std::string out(text_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return out;
  }

  bool ParseBool() {
    if (text_.substr(pos_, 4) == "True") {
      pos_ += 4;
      return true;
    }
    if (text_.substr(pos_, 5) == "False") {
      pos_ += 5;
      return false;
    }
    throw FormatError("expected True or False in NPY header");
  }

  std::vector<std::size_t> ParseShape() {
    std::vector<std::size_t> shape;
    Expect('(');
    SkipSpace();
    while (Peek() != ')') {
      if (!std::isdigit(static_cast<unsigned char>(Peek()))) {
        throw FormatError("expected a dimension in NPY shape");
      }
      std::size_t value = 0;
      while (std::isdigit(static_cast<unsigned char>(Peek()))) {
        value = value * 10 + static_cast<std::size_t>(Peek() - '0');
        if (value > (std::size_t{1} << 40)) {
          throw FormatError("NPY dimension too large");
        }
        ++pos_;
      }
      shape.push_back(value);
      SkipSpace();
      if (Peek() == ',') {
        ++pos_;
        SkipSpace();
      } else if (Peek() != ')') {
        throw FormatError("expected ',' or ')' in NPY shape");
      }
    }
    ++pos_;
    return shape;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

template <typename T>
void DecodeAs(const std::uint8_t* src, std::size_t n, std::vector<double>& out) {
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    T v;
    std::memcpy(&v, src + i * sizeof(T), sizeof(T));
    out[i] = static_cast<double>(v);
  }
}

template <typename T>
void EncodeAs(const std::vector<double>& values, std::vector<std::uint8_t>& out) {
  for (double value : values) {
    if constexpr (std::is_integral_v<T>) {
      if (!(value >= static_cast<double>(std::numeric_limits<T>::min()) &&
            value <= static_cast<double>(std::numeric_limits<T>::max())) ||
          value != static_cast<double>(static_cast<T>(value))) {
        throw ValidationError("value " + std::to_string(value) +
                              " does not fit the integer dtype");
      }
    }
    T v = static_cast<T>(value);
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(&v);
    out.insert(out.end(), bytes, bytes + sizeof(T));
  }
}

std::string ShapeString(const std::vector<std::size_t>& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) s += ", ";
    s += std::to_string(shape[i]);
  }
  if (shape.size() == 1) s += ",";
  return s + ")";
}

int CheckedDim(std::size_t dim) {
  if (dim == 0 || dim > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
    throw ShapeError("array dimension " + std::to_string(dim) +
                     " is out of range");
  }
  return static_cast<int>(dim);
}

}  // namespace

std::size_t NpyArray::element_count() const {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string DescrFor(DType dtype) {
  switch (dtype) {
    case DType::kFloat32:
      return "<f4";
    case DType::kFloat64:
      return "<f8";
    case DType::kUInt8:
      return "|u1";
    case DType::kInt32:
      return "<i4";
    case DType::kUInt16:
      return "<u2";
  }
  return "";
}

NpyArray ParseNpy(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPreambleSize ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("missing NPY magic bytes");
  }
  if (bytes[6] != 1 || bytes[7] != 0) {
    throw FormatError("unsupported NPY version " + std::to_string(bytes[6]) +
                      "." + std::to_string(bytes[7]));
  }
  const std::size_t header_len =
      static_cast<std::size_t>(bytes[8]) | (static_cast<std::size_t>(bytes[9]) << 8);
  if (bytes.size() < kPreambleSize + header_len) {
    throw FormatError("truncated NPY header");
  }
  std::string_view header_text(
      reinterpret_cast<const char*>(bytes.data() + kPreambleSize), header_len);
  const auto header = HeaderParser(header_text).Parse();
  if (header.fortran_order) {
    throw FormatError("Fortran-ordered NPY arrays are not supported");
  }

  NpyArray array;
  array.dtype = DTypeFromDescr(header.descr);
  array.shape = header.shape;
  const std::size_t count = array.element_count();
  const std::size_t payload = bytes.size() - kPreambleSize - header_len;
  if (payload != count * ItemSize(array.dtype)) {
    throw FormatError("NPY payload holds " + std::to_string(payload) +
                      " bytes, shape " + ShapeString(array.shape) + " needs " +
                      std::to_string(count * ItemSize(array.dtype)));
  }
  const std::uint8_t* data = bytes.data() + kPreambleSize + header_len;
  switch (array.dtype) {
    case DType::kFloat32:
      DecodeAs<float>(data, count, array.values);
      break;
    case DType::kFloat64:
      DecodeAs<double>(data, count, array.values);
      break;
    case DType::kUInt8:
      DecodeAs<std::uint8_t>(data, count, array.values);
      break;
    case DType::kInt32:
      DecodeAs<std::int32_t>(data, count, array.values);
      break;
    case DType::kUInt16:
      DecodeAs<std::uint16_t>(data, count, array.values);
      break;
  }
  return array;
}

std::vector<std::uint8_t> SerializeNpy(const NpyArray& array) {
  if (array.values.size() != array.element_count()) {
    throw ShapeError("NPY value count does not match shape");
  }
  std::string header = "{'descr': '" + DescrFor(array.dtype) +
                       "', 'fortran_order': False, 'shape': " +
                       ShapeString(array.shape) + ", }";
  // Pad with spaces so the data section starts on a 64-byte boundary.
  std::size_t total = kPreambleSize + header.size() + 1;
  header.append((64 - total % 64) % 64, ' ');
  header.push_back('\n');
  if (header.size() > 0xFFFF) throw FormatError("NPY header too long");

  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.push_back(1);
  out.push_back(0);
  out.push_back(static_cast<std::uint8_t>(header.size() & 0xFF));
  out.push_back(static_cast<std::uint8_t>(header.size() >> 8));
  out.insert(out.end(), header.begin(), header.end());
  out.reserve(out.size() + array.values.size() * ItemSize(array.dtype));
  switch (array.dtype) {
    case DType::kFloat32:
      EncodeAs<float>(array.values, out);
      break;
    case DType::kFloat64:
      EncodeAs<double>(array.values, out);
      break;
    case DType::kUInt8:
      EncodeAs<std::uint8_t>(array.values, out);
      break;
    case DType::kInt32:
      EncodeAs<std::int32_t>(array.values, out);
      break;
    case DType::kUInt16:
      EncodeAs<std::uint16_t>(array.values, out);
      break;
  }
  return out;
}

NpyArray ReadNpy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
  return ParseNpy(bytes);
}

void WriteNpy(const NpyArray& array, const std::filesystem::path& path) {
  const auto bytes = SerializeNpy(array);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

LoadedArray ToLoadedArray(const NpyArray& array,
                          std::optional<int> ignore_value) {
  if (array.shape.size() == 2 && !IsFloating(array.dtype)) {
    std::vector<std::int32_t> labels(array.values.begin(), array.values.end());
    return LabelMask(CheckedDim(array.shape[0]), CheckedDim(array.shape[1]),
                     std::move(labels), ignore_value, array.dtype);
  }
  if (!IsFloating(array.dtype)) {
    throw ShapeError("integer arrays must be 2D label masks, got shape " +
                     ShapeString(array.shape));
  }
  if (array.shape.size() == 2) {
    return FeatureTensor(1, CheckedDim(array.shape[0]),
                         CheckedDim(array.shape[1]), array.values, array.dtype);
  }
  if (array.shape.size() == 3) {
    return FeatureTensor(CheckedDim(array.shape[0]), CheckedDim(array.shape[1]),
                         CheckedDim(array.shape[2]), array.values, array.dtype);
  }
  throw ShapeError("floating arrays must be 2D or 3D, got shape " +
                   ShapeString(array.shape));
}

LoadedArray LoadArray(const std::filesystem::path& path,
                      std::optional<int> ignore_value) {
  return ToLoadedArray(ReadNpy(path), ignore_value);
}

FeatureTensor LoadFeatureTensor(const std::filesystem::path& path) {
  auto loaded = LoadArray(path);
  if (auto* tensor = std::get_if<FeatureTensor>(&loaded)) {
    return std::move(*tensor);
  }
  throw ShapeError("'" + path.string() +
                   "' holds an integer label mask, expected floating features");
}

LabelMask LoadLabelMask(const std::filesystem::path& path,
                        std::optional<int> ignore_value) {
  auto loaded = LoadArray(path, ignore_value);
  if (auto* mask = std::get_if<LabelMask>(&loaded)) return std::move(*mask);
  throw ShapeError("'" + path.string() +
                   "' holds floating data, expected an integer label mask");
}

NpyArray ToNpy(const FeatureTensor& tensor) {
  return {tensor.dtype(),
          {static_cast<std::size_t>(tensor.channels()),
           static_cast<std::size_t>(tensor.height()),
           static_cast<std::size_t>(tensor.width())},
          tensor.data()};
}

NpyArray ToNpy(const LabelMask& mask) {
  return {mask.dtype(),
          {static_cast<std::size_t>(mask.height()),
           static_cast<std::size_t>(mask.width())},
          std::vector<double>(mask.labels().begin(), mask.labels().end())};
}

NpyArray ToNpy(const RealMap& map) {
  return {DType::kFloat64,
          {static_cast<std::size_t>(map.height),
           static_cast<std::size_t>(map.width)},
          map.values};
}

void SaveArray(const FeatureTensor& tensor, const std::filesystem::path& path) {
  WriteNpy(ToNpy(tensor), path);
}

void SaveArray(const LabelMask& mask, const std::filesystem::path& path) {
  WriteNpy(ToNpy(mask), path);
}

void SaveArray(const RealMap& map, const std::filesystem::path& path) {
  WriteNpy(ToNpy(map), path);
}

}  // namespace alias_scope
