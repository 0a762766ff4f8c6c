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

// Correlation studies between local aliasing and segmentation errors.

#ifndef ALIAS_SCOPE_ANALYSIS_H_
#define ALIAS_SCOPE_ANALYSIS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "alias_scope/antialias.h"
#include "alias_scope/segmetrics.h"
#include "alias_scope/tensor.h"

namespace alias_scope {

inline constexpr int kDefaultWindow = 32;
inline constexpr int kDefaultWindowStride = 8;
inline constexpr int kDefaultBins = 20;

// Per-pixel score in [0, 1] plus how it was produced.
struct ScoreMap {
  int height = 0;
  int width = 0;
  std::vector<double> values;
  std::string source;  // "patch_aliasing" or "user_supplied"
  int window = 0;
  int stride = 0;
  double cutoff = 0.0;

  double at(int h, int w) const {
    return values[static_cast<std::size_t>(h) * width + w];
  }
};

// Slides a window x window patch with the given stride (the last position on
// each axis is clamped to the image edge), scores each patch in per-channel
// mean mode and assigns the score to the patch centre. Every other pixel takes
// the value of its nearest centre, ties to the lower index. Patches with no
// spectral power score 0. Throws ShapeError if the window exceeds the image.
ScoreMap PatchAliasingMap(const FeatureTensor& f, int window, int stride,
                          const CutoffSpec& cutoff);

// Wraps a user-supplied map (e.g. a confidence map). Throws ValidationError
// for values outside [0, 1].
ScoreMap ScoreMapFromValues(const RealMap& values);

// Nearest-neighbour upsampling by integer factors to height x width. Throws
// ShapeError when the target is not an integral multiple.
ScoreMap ResizeScoreMap(const ScoreMap& map, int height, int width);

// CE(h, w) = -log(p[gt(h, w)](h, w)); NaN at ignored pixels. Probabilities
// are floored at 1e-12 so the map stays finite. Throws ValidationError when a
// pixel's probabilities are not a simplex within `tolerance`.
RealMap PixelCrossEntropy(const FeatureTensor& probs, const LabelMask& gt,
                          double tolerance = 1e-6);

struct BinStats {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;
  std::optional<double> mean;  // nullopt for an empty bin
  std::size_t false_response = 0;
  std::size_t merging = 0;
  std::size_t displacement = 0;
};

struct BinnedCurve {
  std::vector<BinStats> bins;

  std::size_t TotalCount() const;
};

// Index of the equal-width bin on [0, 1] holding `score`.
int BinIndex(double score, int n_bins);

// Mean of `values` per score bin over pixels where `mask` is set. NaN values
// are skipped. Throws ShapeError for n_bins < 2 or mismatched sizes.
BinnedCurve BinByScore(const ScoreMap& score, const RealMap& values,
                       const BinaryMask& mask, int n_bins);

// Union over classes of the per-class tag maps. A pixel takes the tag its
// ground-truth class assigns when that tag is not none, otherwise the tag of
// the lowest class id that tags it. Ground-truth-ignored pixels stay none.
TagMap MulticlassBoundaryTags(const LabelMask& pred, const LabelMask& gt, int d,
                              int num_classes,
                              ClassSet classes = ClassSet::kPresentInEither);

// Union over classes of the ground-truth boundary bands, ignored pixels
// excluded.
BinaryMask GroundTruthBoundary(const LabelMask& gt, int d, int num_classes);

// Histogram of tagged pixels per score bin. `count` is the number of tagged
// pixels and `mean` their mean score.
BinnedCurve ErrorTypeDistribution(const LabelMask& pred, const LabelMask& gt,
                                  const ScoreMap& score, int d, int n_bins,
                                  int num_classes,
                                  ClassSet classes = ClassSet::kPresentInEither);

}  // namespace alias_scope

#endif  // ALIAS_SCOPE_ANALYSIS_H_
