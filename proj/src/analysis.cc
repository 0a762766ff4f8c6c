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

#include "alias_scope/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alias_scope/errors.h"
#include "alias_scope/parallel.h"

namespace alias_scope {

namespace {

// Window origins along one axis; the final origin is n - window.
std::vector<int> WindowOrigins(int n, int window, int stride) {
  std::vector<int> origins;
  for (int p = 0; p + window <= n; p += stride) origins.push_back(p);
  if (origins.back() != n - window) origins.push_back(n - window);
  return origins;
}

// For every coordinate in [0, n), the index of the nearest centre.
std::vector<int> NearestCentre(int n, const std::vector<int>& centres) {
  std::vector<int> nearest(n);
  std::size_t j = 0;
  for (int x = 0; x < n; ++x) {
    while (j + 1 < centres.size() &&
           std::abs(centres[j + 1] - x) < std::abs(centres[j] - x)) {
      ++j;
    }
    nearest[x] = static_cast<int>(j);
  }
  return nearest;
}

void CheckSize(int h, int w, int eh, int ew, const char* what) {
  if (h != eh || w != ew) {
    throw ShapeError(std::string(what) + " is " + std::to_string(h) + "x" +
                     std::to_string(w) + ", expected " + std::to_string(eh) +
                     "x" + std::to_string(ew));
  }
}

}  // namespace

ScoreMap PatchAliasingMap(const FeatureTensor& f, int window, int stride,
                          const CutoffSpec& cutoff) {
  if (window <= 0 || stride <= 0) {
    throw ShapeError("window and stride must be positive");
  }
  if (window > std::min(f.height(), f.width())) {
    throw ShapeError("window " + std::to_string(window) +
                     " exceeds the feature map " + std::to_string(f.height()) +
                     "x" + std::to_string(f.width()));
  }
  const auto ys = WindowOrigins(f.height(), window, stride);
  const auto xs = WindowOrigins(f.width(), window, stride);
  std::vector<double> patch_scores(ys.size() * xs.size());
  ParallelFor(patch_scores.size(), [&](std::size_t idx) {
    const int oy = ys[idx / xs.size()];
    const int ox = xs[idx % xs.size()];
    FeatureTensor patch(f.channels(), window, window);
    for (int c = 0; c < f.channels(); ++c) {
      for (int y = 0; y < window; ++y) {
        for (int x = 0; x < window; ++x) {
          patch.at(c, y, x) = f.at(c, oy + y, ox + x);
        }
      }
    }
    const BandPower power = ComputeBandPower(patch, cutoff);
    double total = 0.0;
    for (double t : power.total) total += t;
    patch_scores[idx] =
        total > 0.0 ? AliasingScore(power, ScoreMode::kPerChannelMean) : 0.0;
  });

  std::vector<int> cy(ys.size()), cx(xs.size());
  for (std::size_t i = 0; i < ys.size(); ++i) cy[i] = ys[i] + window / 2;
  for (std::size_t i = 0; i < xs.size(); ++i) cx[i] = xs[i] + window / 2;
  const auto near_y = NearestCentre(f.height(), cy);
  const auto near_x = NearestCentre(f.width(), cx);

  ScoreMap map;
  map.height = f.height();
  map.width = f.width();
  map.source = "patch_aliasing";
  map.window = window;
  map.stride = stride;
  map.cutoff = cutoff.value();
  map.values.resize(f.plane_size());
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      map.values[static_cast<std::size_t>(y) * f.width() + x] =
          patch_scores[near_y[y] * xs.size() + near_x[x]];
    }
  }
  return map;
}

ScoreMap ScoreMapFromValues(const RealMap& values) {
  for (double v : values.values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError("score map values must lie in [0, 1]");
    }
  }
  ScoreMap map;
  map.height = values.height;
  map.width = values.width;
  map.values = values.values;
  map.source = "user_supplied";
  return map;
}

ScoreMap ResizeScoreMap(const ScoreMap& map, int height, int width) {
  if (map.height == height && map.width == width) return map;
  if (height % map.height != 0 || width % map.width != 0 ||
      height / map.height != width / map.width) {
    throw ShapeError("score map " + std::to_string(map.height) + "x" +
                     std::to_string(map.width) +
                     " cannot be upsampled by one integer factor to " +
                     std::to_string(height) + "x" + std::to_string(width));
  }
  const int factor = height / map.height;
  ScoreMap out = map;
  out.height = height;
  out.width = width;
  out.values.resize(static_cast<std::size_t>(height) * width);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      out.values[static_cast<std::size_t>(y) * width + x] =
          map.at(y / factor, x / factor);
    }
  }
  return out;
}

RealMap PixelCrossEntropy(const FeatureTensor& probs, const LabelMask& gt,
                          double tolerance) {
  CheckSize(probs.height(), probs.width(), gt.height(), gt.width(),
            "probability map");
  const int h = gt.height();
  const int w = gt.width();
  RealMap ce(h, w, std::numeric_limits<double>::quiet_NaN());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      for (int c = 0; c < probs.channels(); ++c) {
        const double p = probs.at(c, y, x);
        if (p < -tolerance) {
          throw ValidationError("negative probability at (" +
                                std::to_string(y) + ", " + std::to_string(x) +
                                ")");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > tolerance) {
        throw ValidationError("probabilities at (" + std::to_string(y) + ", " +
                              std::to_string(x) + ") sum to " +
                              std::to_string(sum));
      }
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (gt.IsIgnored(i)) continue;
      const int label = gt.labels()[i];
      if (label >= probs.channels()) {
        throw ValidationError("label " + std::to_string(label) +
                              " has no probability channel");
      }
      ce.values[i] = -std::log(std::max(probs.at(label, y, x), 1e-12));
    }
  }
  return ce;
}

std::size_t BinnedCurve::TotalCount() const {
  std::size_t total = 0;
  for (const auto& b : bins) total += b.count;
  return total;
}

int BinIndex(double score, int n_bins) {
  const int i = static_cast<int>(std::floor(score * n_bins));
  return std::clamp(i, 0, n_bins - 1);
}

namespace {

BinnedCurve EmptyCurve(int n_bins) {
  if (n_bins < 2) throw ShapeError("at least two bins are required");
  BinnedCurve curve;
  curve.bins.resize(n_bins);
  for (int b = 0; b < n_bins; ++b) {
    curve.bins[b].lower = static_cast<double>(b) / n_bins;
    curve.bins[b].upper = static_cast<double>(b + 1) / n_bins;
  }
  return curve;
}

void FinishMeans(BinnedCurve& curve, const std::vector<double>& sums) {
  for (std::size_t b = 0; b < curve.bins.size(); ++b) {
    if (curve.bins[b].count > 0) {
      curve.bins[b].mean = sums[b] / static_cast<double>(curve.bins[b].count);
    }
  }
}

}  // namespace

BinnedCurve BinByScore(const ScoreMap& score, const RealMap& values,
                       const BinaryMask& mask, int n_bins) {
  BinnedCurve curve = EmptyCurve(n_bins);
  CheckSize(values.height, values.width, score.height, score.width,
            "value map");
  CheckSize(mask.height(), mask.width(), score.height, score.width, "mask");
  std::vector<double> sums(n_bins, 0.0);
  for (std::size_t i = 0; i < score.values.size(); ++i) {
    if (!mask[i] || std::isnan(values.values[i])) continue;
    const int b = BinIndex(score.values[i], n_bins);
    ++curve.bins[b].count;
    sums[b] += values.values[i];
  }
  FinishMeans(curve, sums);
  return curve;
}

TagMap MulticlassBoundaryTags(const LabelMask& pred, const LabelMask& gt,
                              int d, int num_classes, ClassSet classes) {
  pred.Validate(num_classes);
  gt.Validate(num_classes);
  TagMap merged{gt.height(), gt.width(),
                std::vector<BoundaryTag>(gt.size(), BoundaryTag::kNone)};
  std::vector<bool> from_gt_class(gt.size(), false);
  for (int c : SelectClasses(pred, gt, num_classes, classes)) {
    const auto [p, g] = EvaluationMasks(pred, gt, c);
    const TagMap tags = ClassifyBoundaryPixels(p, g, d);
    for (std::size_t i = 0; i < gt.size(); ++i) {
      if (gt.IsIgnored(i) || tags.tags[i] == BoundaryTag::kNone) continue;
      if (gt.labels()[i] == c) {
        merged.tags[i] = tags.tags[i];
        from_gt_class[i] = true;
      } else if (!from_gt_class[i] && merged.tags[i] == BoundaryTag::kNone) {
        // Classes arrive in ascending order, so the first writer is the
        // lowest class id.
        merged.tags[i] = tags.tags[i];
      }
    }
  }
  return merged;
}

BinaryMask GroundTruthBoundary(const LabelMask& gt, int d, int num_classes) {
  gt.Validate(num_classes);
  BinaryMask boundary(gt.height(), gt.width());
  for (int c : gt.PresentClasses()) {
    boundary = boundary | ComputeBoundaryBand(ClassMask(gt, c), d).band;
  }
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt.IsIgnored(i)) boundary.set(i, false);
  }
  return boundary;
}

BinnedCurve ErrorTypeDistribution(const LabelMask& pred, const LabelMask& gt,
                                  const ScoreMap& score, int d, int n_bins,
                                  int num_classes, ClassSet classes) {
  BinnedCurve curve = EmptyCurve(n_bins);
  CheckSize(gt.height(), gt.width(), score.height, score.width, "ground truth");
  const TagMap tags = MulticlassBoundaryTags(pred, gt, d, num_classes, classes);
  std::vector<double> sums(n_bins, 0.0);
  for (std::size_t i = 0; i < tags.tags.size(); ++i) {
    const BoundaryTag tag = tags.tags[i];
    if (tag == BoundaryTag::kNone) continue;
    const int b = BinIndex(score.values[i], n_bins);
    BinStats& bin = curve.bins[b];
    ++bin.count;
    sums[b] += score.values[i];
    switch (tag) {
      case BoundaryTag::kFalseResponse:
        ++bin.false_response;
        break;
      case BoundaryTag::kMerging:
        ++bin.merging;
        break;
      case BoundaryTag::kDisplacement:
        ++bin.displacement;
        break;
      case BoundaryTag::kNone:
        break;
    }
  }
  FinishMeans(curve, sums);
  return curve;
}

}  // namespace alias_scope
