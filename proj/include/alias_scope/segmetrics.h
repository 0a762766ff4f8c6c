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

// Segmentation metrics: boundary bands, mIoU, boundary IoU / accuracy and the
// false-response / merging / displacement error rates.

#ifndef ALIAS_SCOPE_SEGMETRICS_H_
#define ALIAS_SCOPE_SEGMETRICS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "alias_scope/tensor.h"

namespace alias_scope {

inline constexpr int kDefaultBandWidth = 15;

// Band width for an image of the given size: 15 at 1024 pixels on the short
// side, scaled linearly and never below 1.
int ScaledBandWidth(int height, int width);

// Set pixels with at least one 4-neighbour unset or outside the image.
BinaryMask Contour(const BinaryMask& mask);

// Pixels within Euclidean distance <= d of the contour, on both sides of it.
struct BoundaryBand {
  BinaryMask source;
  int d = kDefaultBandWidth;
  BinaryMask band;
};

// Throws ShapeError for d < 1.
BoundaryBand ComputeBoundaryBand(const BinaryMask& mask, int d);

// Squared Euclidean distance from every pixel to the nearest set pixel of
// `seeds`; +inf everywhere when no pixel is set.
std::vector<double> SquaredDistanceTransform(const BinaryMask& seeds);

// Pixel counts behind the error rates. With P_d, G_d the bands of the
// prediction P and ground truth G:
struct ErrorCounts {
  std::size_t pred_band = 0;       // |P_d|
  std::size_t gt_band = 0;         // |G_d|
  std::size_t false_response = 0;  // |P_d - G_d|
  std::size_t merging = 0;         // |G_d - P_d|
  std::size_t band_overlap = 0;    // |P_d & G_d|
  std::size_t inner_overlap = 0;   // |(P_d & P) & (G_d & G)|
};

// Rates in [0, 1]; nullopt when the denominator is empty.
struct ErrorBreakdown {
  std::optional<double> ferr;
  std::optional<double> merr;
  std::optional<double> derr;
  ErrorCounts counts;
};

ErrorCounts CountBoundaryErrors(const BinaryMask& pred, const BinaryMask& gt,
                                int d);
ErrorBreakdown ErrorsFromCounts(const ErrorCounts& counts);
ErrorBreakdown ErrorMetrics(const BinaryMask& pred, const BinaryMask& gt, int d);

// |(P_d & P) & (G_d & G)| / |(P_d & P) | (G_d & G)|.
std::optional<double> BoundaryIou(const BinaryMask& pred, const BinaryMask& gt,
                                  int d);
// Fraction of G_d where the prediction agrees with the ground truth.
std::optional<double> BoundaryAccuracy(const BinaryMask& pred,
                                       const BinaryMask& gt, int d);

enum class BoundaryTag : std::uint8_t {
  kNone = 0,
  kFalseResponse = 1,
  kMerging = 2,
  kDisplacement = 3,
};

std::string_view BoundaryTagName(BoundaryTag tag);

struct TagMap {
  int height = 0;
  int width = 0;
  std::vector<BoundaryTag> tags;

  BoundaryTag at(int h, int w) const {
    return tags[static_cast<std::size_t>(h) * width + w];
  }
  std::size_t Count(BoundaryTag tag) const;
};

// false_response = P_d - G_d, merging = G_d - P_d,
// displacement = (P_d & G_d) - ((P_d & P) & (G_d & G)).
TagMap ClassifyBoundaryPixels(const BinaryMask& pred, const BinaryMask& gt,
                              int d);

// Which classes enter a class average.
enum class ClassSet {
  kPresentInGt,      // classes with at least one ground-truth pixel
  kPresentInEither,  // classes in the ground truth or the prediction
};

std::string_view ClassSetName(ClassSet set);
ClassSet ParseClassSet(std::string_view name);

// Selected classes, ascending. Ground-truth-ignored pixels never count.
std::vector<int> SelectClasses(const LabelMask& pred, const LabelMask& gt,
                               int num_classes, ClassSet set);

// Binary masks of class c for evaluation: the prediction mask is cleared
// wherever the ground truth is ignored.
std::pair<BinaryMask, BinaryMask> EvaluationMasks(const LabelMask& pred,
                                                  const LabelMask& gt,
                                                  int class_id);

struct ClassErrors {
  int class_id = 0;
  ErrorBreakdown errors;
  // DErr obtained when the prediction equals the ground truth.
  std::optional<double> derr_perfect_baseline;
  std::optional<double> biou;
  std::optional<double> bacc;
};

struct MulticlassErrorReport {
  std::vector<ClassErrors> per_class;
  // Averages over classes whose value is defined.
  std::optional<double> mean_ferr;
  std::optional<double> mean_merr;
  std::optional<double> mean_derr;
  std::optional<double> mean_derr_perfect_baseline;
  std::optional<double> mean_biou;
  std::optional<double> mean_bacc;
};

// Per-class boundary errors for label masks. BAcc here compares labels: the
// fraction of non-ignored G_d pixels whose predicted label equals the
// ground-truth label. Throws ShapeError on mismatched sizes and
// ValidationError on labels >= num_classes.
MulticlassErrorReport MulticlassErrors(
    const LabelMask& pred, const LabelMask& gt, int d, int num_classes,
    ClassSet classes = ClassSet::kPresentInEither);

struct IouReport {
  // Indexed by class id; nullopt for classes with an empty union or not
  // selected.
  std::vector<std::optional<double>> per_class;
  std::optional<double> miou;
};

// Per-class IoU over pixels whose ground truth is not ignored.
IouReport ComputeIou(const LabelMask& pred, const LabelMask& gt,
                     int num_classes, ClassSet classes = ClassSet::kPresentInGt);
std::optional<double> Miou(const LabelMask& pred, const LabelMask& gt,
                           int num_classes,
                           ClassSet classes = ClassSet::kPresentInGt);

}  // namespace alias_scope

#endif  // ALIAS_SCOPE_SEGMETRICS_H_
