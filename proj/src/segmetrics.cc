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

#include "alias_scope/segmetrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "alias_scope/errors.h"

namespace alias_scope {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::optional<double> Ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

// One pass of the Felzenszwalb-Huttenlocher lower-envelope transform over a
// strided line of n samples.
void DistanceTransform1d(double* f, std::size_t n, std::size_t stride,
                         std::vector<double>& in, std::vector<int>& v,
                         std::vector<double>& z) {
  for (std::size_t i = 0; i < n; ++i) in[i] = f[i * stride];
  int k = -1;
  for (int q = 0; q < static_cast<int>(n); ++q) {
    if (std::isinf(in[q])) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s;
    while (true) {
      const int p = v[k];
      s = ((in[q] + static_cast<double>(q) * q) -
           (in[p] + static_cast<double>(p) * p)) /
          (2.0 * (q - p));
      // z[0] is -inf, so this stops at k == 0.
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (k < 0) return;  // no finite samples on this line
  int j = 0;
  for (int q = 0; q < static_cast<int>(n); ++q) {
    while (z[j + 1] < q) ++j;
    const double dq = static_cast<double>(q - v[j]);
    f[q * stride] = dq * dq + in[v[j]];
  }
}

void CheckShapes(const BinaryMask& a, const BinaryMask& b) {
  if (!a.SameShape(b)) {
    throw ShapeError("mask sizes differ: " + std::to_string(a.height()) + "x" +
                     std::to_string(a.width()) + " vs " +
                     std::to_string(b.height()) + "x" +
                     std::to_string(b.width()));
  }
}

void CheckShapes(const LabelMask& a, const LabelMask& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw ShapeError("label mask sizes differ");
  }
}

std::optional<double> MeanDefined(const std::vector<std::optional<double>>& v) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& x : v) {
    if (x) {
      sum += *x;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace

int ScaledBandWidth(int height, int width) {
  const double scaled = kDefaultBandWidth * std::min(height, width) / 1024.0;
  return std::max(1, static_cast<int>(std::lround(scaled)));
}

BinaryMask Contour(const BinaryMask& mask) {
  const int h = mask.height();
  const int w = mask.width();
  BinaryMask out(h, w);
  auto unset = [&](int y, int x) {
    return y < 0 || y >= h || x < 0 || x >= w || !mask.at(y, x);
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(y, x)) continue;
      if (unset(y - 1, x) || unset(y + 1, x) || unset(y, x - 1) ||
          unset(y, x + 1)) {
        out.set(y, x, true);
      }
    }
  }
  return out;
}

std::vector<double> SquaredDistanceTransform(const BinaryMask& seeds) {
  const auto h = static_cast<std::size_t>(seeds.height());
  const auto w = static_cast<std::size_t>(seeds.width());
  std::vector<double> dist(h * w);
  for (std::size_t i = 0; i < dist.size(); ++i) dist[i] = seeds[i] ? 0.0 : kInf;
  const std::size_t n = std::max(h, w);
  std::vector<double> in(n), z(n + 1);
  std::vector<int> v(n);
  for (std::size_t x = 0; x < w; ++x) {
    DistanceTransform1d(dist.data() + x, h, w, in, v, z);
  }
  for (std::size_t y = 0; y < h; ++y) {
    DistanceTransform1d(dist.data() + y * w, w, 1, in, v, z);
  }
  return dist;
}

BoundaryBand ComputeBoundaryBand(const BinaryMask& mask, int d) {
  if (d < 1) throw ShapeError("band width must be at least 1");
  const auto dist = SquaredDistanceTransform(Contour(mask));
  BinaryMask band(mask.height(), mask.width());
  const double limit = static_cast<double>(d) * d;
  for (std::size_t i = 0; i < dist.size(); ++i) band.set(i, dist[i] <= limit);
  return {mask, d, std::move(band)};
}

ErrorCounts CountBoundaryErrors(const BinaryMask& pred, const BinaryMask& gt,
                                int d) {
  CheckShapes(pred, gt);
  const BinaryMask pd = ComputeBoundaryBand(pred, d).band;
  const BinaryMask gd = ComputeBoundaryBand(gt, d).band;
  ErrorCounts counts;
  for (std::size_t i = 0; i < pd.size(); ++i) {
    const bool in_p = pd[i];
    const bool in_g = gd[i];
    counts.pred_band += in_p;
    counts.gt_band += in_g;
    counts.false_response += in_p && !in_g;
    counts.merging += in_g && !in_p;
    counts.band_overlap += in_p && in_g;
    counts.inner_overlap += in_p && pred[i] && in_g && gt[i];
  }
  return counts;
}

ErrorBreakdown ErrorsFromCounts(const ErrorCounts& counts) {
  ErrorBreakdown out;
  out.counts = counts;
  out.ferr = Ratio(counts.false_response, counts.pred_band);
  out.merr = Ratio(counts.merging, counts.gt_band);
  if (auto kept = Ratio(counts.inner_overlap, counts.band_overlap)) {
    out.derr = 1.0 - *kept;
  }
  return out;
}

ErrorBreakdown ErrorMetrics(const BinaryMask& pred, const BinaryMask& gt,
                            int d) {
  return ErrorsFromCounts(CountBoundaryErrors(pred, gt, d));
}

std::optional<double> BoundaryIou(const BinaryMask& pred, const BinaryMask& gt,
                                  int d) {
  CheckShapes(pred, gt);
  const BinaryMask pd = ComputeBoundaryBand(pred, d).band;
  const BinaryMask gd = ComputeBoundaryBand(gt, d).band;
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < pd.size(); ++i) {
    const bool p = pd[i] && pred[i];
    const bool g = gd[i] && gt[i];
    inter += p && g;
    uni += p || g;
  }
  return Ratio(inter, uni);
}

std::optional<double> BoundaryAccuracy(const BinaryMask& pred,
                                       const BinaryMask& gt, int d) {
  CheckShapes(pred, gt);
  const BinaryMask gd = ComputeBoundaryBand(gt, d).band;
  std::size_t hit = 0, total = 0;
  for (std::size_t i = 0; i < gd.size(); ++i) {
    if (!gd[i]) continue;
    ++total;
    hit += pred[i] == gt[i];
  }
  return Ratio(hit, total);
}

std::string_view BoundaryTagName(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::kNone:
      return "none";
    case BoundaryTag::kFalseResponse:
      return "false_response";
    case BoundaryTag::kMerging:
      return "merging";
    case BoundaryTag::kDisplacement:
      return "displacement";
  }
  return "none";
}

std::size_t TagMap::Count(BoundaryTag tag) const {
  return static_cast<std::size_t>(std::count(tags.begin(), tags.end(), tag));
}

TagMap ClassifyBoundaryPixels(const BinaryMask& pred, const BinaryMask& gt,
                              int d) {
  CheckShapes(pred, gt);
  const BinaryMask pd = ComputeBoundaryBand(pred, d).band;
  const BinaryMask gd = ComputeBoundaryBand(gt, d).band;
  TagMap map{pred.height(), pred.width(),
             std::vector<BoundaryTag>(pred.size(), BoundaryTag::kNone)};
  for (std::size_t i = 0; i < pd.size(); ++i) {
    if (pd[i] && !gd[i]) {
      map.tags[i] = BoundaryTag::kFalseResponse;
    } else if (gd[i] && !pd[i]) {
      map.tags[i] = BoundaryTag::kMerging;
    } else if (pd[i] && gd[i] && !(pred[i] && gt[i])) {
      map.tags[i] = BoundaryTag::kDisplacement;
    }
  }
  return map;
}

std::string_view ClassSetName(ClassSet set) {
  return set == ClassSet::kPresentInGt ? "present_in_gt" : "present_in_either";
}

ClassSet ParseClassSet(std::string_view name) {
  if (name == "present_in_gt" || name == "gt") return ClassSet::kPresentInGt;
  if (name == "present_in_either" || name == "either") {
    return ClassSet::kPresentInEither;
  }
  throw ShapeError("unknown class set '" + std::string(name) + "'");
}

std::vector<int> SelectClasses(const LabelMask& pred, const LabelMask& gt,
                               int num_classes, ClassSet set) {
  CheckShapes(pred, gt);
  std::vector<bool> selected(num_classes, false);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt.IsIgnored(i)) continue;
    selected[gt.labels()[i]] = true;
    if (set == ClassSet::kPresentInEither && !pred.IsIgnored(i)) {
      selected[pred.labels()[i]] = true;
    }
  }
  std::vector<int> out;
  for (int c = 0; c < num_classes; ++c) {
    if (selected[c]) out.push_back(c);
  }
  return out;
}

std::pair<BinaryMask, BinaryMask> EvaluationMasks(const LabelMask& pred,
                                                  const LabelMask& gt,
                                                  int class_id) {
  CheckShapes(pred, gt);
  BinaryMask p = ClassMask(pred, class_id);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt.IsIgnored(i)) p.set(i, false);
  }
  return {std::move(p), ClassMask(gt, class_id)};
}

MulticlassErrorReport MulticlassErrors(const LabelMask& pred,
                                       const LabelMask& gt, int d,
                                       int num_classes, ClassSet classes) {
  CheckShapes(pred, gt);
  pred.Validate(num_classes);
  gt.Validate(num_classes);
  MulticlassErrorReport report;
  std::vector<std::optional<double>> ferr, merr, derr, base, biou, bacc;
  for (int c : SelectClasses(pred, gt, num_classes, classes)) {
    const auto [p, g] = EvaluationMasks(pred, gt, c);
    ClassErrors entry;
    entry.class_id = c;
    entry.errors = ErrorMetrics(p, g, d);
    entry.derr_perfect_baseline = ErrorMetrics(g, g, d).derr;
    entry.biou = BoundaryIou(p, g, d);

    const BinaryMask gd = ComputeBoundaryBand(g, d).band;
    std::size_t hit = 0, total = 0;
    for (std::size_t i = 0; i < gd.size(); ++i) {
      if (!gd[i] || gt.IsIgnored(i)) continue;
      ++total;
      hit += pred.labels()[i] == gt.labels()[i];
    }
    entry.bacc = Ratio(hit, total);

    ferr.push_back(entry.errors.ferr);
    merr.push_back(entry.errors.merr);
    derr.push_back(entry.errors.derr);
    base.push_back(entry.derr_perfect_baseline);
    biou.push_back(entry.biou);
    bacc.push_back(entry.bacc);
    report.per_class.push_back(std::move(entry));
  }
  report.mean_ferr = MeanDefined(ferr);
  report.mean_merr = MeanDefined(merr);
  report.mean_derr = MeanDefined(derr);
  report.mean_derr_perfect_baseline = MeanDefined(base);
  report.mean_biou = MeanDefined(biou);
  report.mean_bacc = MeanDefined(bacc);
  return report;
}

IouReport ComputeIou(const LabelMask& pred, const LabelMask& gt,
                     int num_classes, ClassSet classes) {
  CheckShapes(pred, gt);
  pred.Validate(num_classes);
  gt.Validate(num_classes);
  std::vector<std::size_t> inter(num_classes, 0), uni(num_classes, 0);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt.IsIgnored(i)) continue;
    const int g = gt.labels()[i];
    const bool pred_valid = !pred.IsIgnored(i);
    const int p = pred.labels()[i];
    if (pred_valid && p == g) {
      ++inter[g];
      ++uni[g];
    } else {
      ++uni[g];
      if (pred_valid) ++uni[p];
    }
  }
  IouReport report;
  report.per_class.assign(num_classes, std::nullopt);
  std::vector<std::optional<double>> selected;
  for (int c : SelectClasses(pred, gt, num_classes, classes)) {
    report.per_class[c] = Ratio(inter[c], uni[c]);
    selected.push_back(report.per_class[c]);
  }
  report.miou = MeanDefined(selected);
  return report;
}

std::optional<double> Miou(const LabelMask& pred, const LabelMask& gt,
                           int num_classes, ClassSet classes) {
  return ComputeIou(pred, gt, num_classes, classes).miou;
}

}  // namespace alias_scope
