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

#ifndef ALIAS_SCOPE_ERRORS_H_
#define ALIAS_SCOPE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace alias_scope {

// Base class for every error raised by the library. The command-line tool
// maps these to exit code 2, except InvariantError which maps to 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed array container.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Element type not among the accepted NPY descriptors.
class UnsupportedDtypeError : public Error {
 public:
  using Error::Error;
};

// Content that parses but breaks a type invariant (non-finite values,
// out-of-range labels, non-normalized probabilities).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Inconsistent sizes, strides, kernels or parameter shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A filter with zero norm in a similarity analysis.
class DegenerateFilterError : public Error {
 public:
  using Error::Error;
};

// A ratio whose denominator (total spectral power) is zero.
class UndefinedRatioError : public Error {
 public:
  using Error::Error;
};

// An internal post-condition failed.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace alias_scope

#endif  // ALIAS_SCOPE_ERRORS_H_
