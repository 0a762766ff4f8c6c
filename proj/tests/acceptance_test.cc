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

// Acceptance suite: one PASS or FAIL line per criterion, exit status 1 when
// any criterion fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "alias_scope/antialias.h"
#include "alias_scope/freqmix.h"
#include "alias_scope/npy.h"
#include "alias_scope/sampling.h"
#include "alias_scope/segmetrics.h"
#include "alias_scope/spectral.h"
#include "test_util.h"

namespace alias_scope {
namespace {

namespace fs = std::filesystem;
using testing::SetOracle;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

double MaxAbs(const FeatureTensor& f) {
  double m = 0.0;
  for (double v : f.data()) m = std::max(m, std::abs(v));
  return m;
}

double MaxAbsDiff(const FeatureTensor& a, const FeatureTensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

Outcome FftOracle() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> size(4, 32);
  double worst = 0.0;
  const int pairs = 60;
  for (int i = 0; i < pairs; ++i) {
    const int h = size(rng), w = size(rng);
    const FeatureTensor f = testing::RandomTensor(2, h, w, 1000 + i);
    const Spectrum naive = Dft2Naive(f);
    const double fwd = testing::MaxRelError(Fft2(f).coeffs(), naive.coeffs());
    const double inv = testing::MaxRelError(Ifft2(naive).data(), f.data());
    worst = std::max({worst, fwd, inv});
    if (fwd >= 1e-9 || inv >= 1e-9) {
      o.Fail(Fmt("size %gx%g", h, w) + Fmt(" error %.3g", std::max(fwd, inv)));
    }
  }
  const double secs = Seconds(start);
  if (secs >= 30.0) o.Fail(Fmt("runtime %.1f s", secs));
  if (o.pass) {
    o.detail = std::to_string(pairs) + " size pairs, " +
               Fmt("max rel error %.2e, %.2f s", worst, secs);
  }
  return o;
}

Outcome ParsevalAndSymmetry() {
  Outcome o;
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> size(2, 24);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int c = 1 + t % 3, h = size(rng), w = size(rng);
    const FeatureTensor f = testing::RandomTensor(c, h, w, 2000 + t, -3.0, 3.0);
    const Spectrum s = Fft2(f);
    double spatial = 0.0, spectral = 0.0, sym = 0.0, scale = 0.0;
    for (double v : f.data()) spatial += v * v;
    for (const Complex& z : s.coeffs()) {
      spectral += std::norm(z);
      scale = std::max(scale, std::abs(z));
    }
    for (int ch = 0; ch < c; ++ch) {
      for (int k = 0; k < h; ++k) {
        for (int l = 0; l < w; ++l) {
          sym = std::max(sym, std::abs(s.at(ch, k, l) -
                                       std::conj(s.at(ch, (h - k) % h, (w - l) % w))));
        }
      }
    }
    const double parseval = std::abs(spatial - h * w * spectral) / spatial;
    const double symmetry = sym / scale;
    worst = std::max({worst, parseval, symmetry});
    if (parseval >= 1e-9 || symmetry >= 1e-9) {
      o.Fail("trial " + std::to_string(t) + Fmt(": parseval %.3g symmetry %.3g",
                                                 parseval, symmetry));
    }
  }
  if (o.pass) o.detail = "100 tensors, " + Fmt("max relative deviation %.2e", worst);
  return o;
}

Outcome EsrPinned() {
  Outcome o;
  const double a = Esr(DownsampleSpec::FromStride(3, 64, 128, 2));
  const double b = Esr(DownsampleSpec::FromStride(2, 3, 12, 2));
  const double c = Esr(DownsampleSpec::FromStride(1, 64, 64, 2));
  const double n = Nyquist(DownsampleSpec::FromStride(3, 64, 128, 2));
  if (std::abs(a - std::sqrt(2.0) / 2) > 1e-12) o.Fail(Fmt("K=3 esr %.17g", a));
  if (std::abs(b - 1.0) > 1e-12) o.Fail(Fmt("K=2 esr %.17g", b));
  if (std::abs(c - 0.5) > 1e-12) o.Fail(Fmt("K=1 esr %.17g", c));
  if (std::abs(n - std::sqrt(2.0) / 4) > 1e-12) o.Fail(Fmt("nyquist %.17g", n));
  if (o.pass) o.detail = Fmt("esr %.12f, 1, 0.5; nyquist %.12f", a, n);
  return o;
}

Outcome AliasFold() {
  Outcome o;
  const auto start = Clock::now();
  int cases = 0;
  for (int stride : {2, 4}) {
    for (int num = 1; num <= 7; ++num) {
      const double k = num / 16.0;
      const FeatureTensor sub = Subsample(testing::Tone(1, 64, 64, 0.0, k), stride);
      const Spectrum s = Fft2(sub);
      const int n = sub.width();
      int peak = 0;
      for (int l = 1; l <= n / 2; ++l) {
        if (std::abs(s.at(0, 0, l)) > std::abs(s.at(0, 0, peak))) peak = l;
      }
      const double predicted = PredictedAliasFrequency(k, stride) * n;
      if (predicted != std::round(predicted) ||
          peak != static_cast<int>(predicted)) {
        o.Fail(Fmt("k=%g stride=%g", k, stride) + ": peak bin " +
               std::to_string(peak) + Fmt(", predicted %g", predicted));
      }
      ++cases;
    }
  }
  const double secs = Seconds(start);
  if (secs >= 5.0) o.Fail(Fmt("runtime %.2f s", secs));
  if (o.pass) o.detail = std::to_string(cases) + Fmt(" tones, %.3f s", secs);
  return o;
}

Outcome DafExactness() {
  Outcome o;
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> size(4, 32);
  double worst_score = 0.0, worst_idem = 0.0, worst_res = 0.0;
  for (int t = 0; t < 100; ++t) {
    const FeatureTensor f =
        testing::RandomTensor(1 + t % 4, size(rng), size(rng), 3000 + t);
    for (double c : {0.125, 0.25, std::sqrt(2.0) / 4}) {
      const CutoffSpec cutoff(c);
      const DafResult once = DafWithResidue(f, cutoff);
      const double score = AliasingScore(once.output, cutoff);
      const double idem = MaxAbsDiff(Daf(once.output, cutoff), once.output);
      const double res = once.max_imag_residue / MaxAbs(f);
      worst_score = std::max(worst_score, score);
      worst_idem = std::max(worst_idem, idem);
      worst_res = std::max(worst_res, res);
      if (score >= 1e-12 || idem >= 1e-9 || res >= 1e-9) {
        o.Fail("trial " + std::to_string(t) + Fmt(" cutoff %g", c));
      }
    }
  }
  if (o.pass) {
    o.detail = Fmt("max score %.2e, max idempotence gap %.2e", worst_score, worst_idem) +
               Fmt(", max residue %.2e", worst_res);
  }
  return o;
}

Outcome SpaceToDepthRoundTrip() {
  Outcome o;
  std::mt19937_64 rng(14);
  for (int t = 0; t < 100; ++t) {
    const int b = 2 + t % 3;
    const int h = b * (1 + static_cast<int>(rng() % 6));
    const int w = b * (1 + static_cast<int>(rng() % 6));
    const FeatureTensor f = testing::RandomTensor(1 + t % 3, h, w, 4000 + t, -1e6, 1e6);
    const FeatureTensor back = DepthToSpace(SpaceToDepth(f, b), b);
    if (back.data() != f.data() || !back.SameShape(f)) {
      o.Fail("trial " + std::to_string(t) + " not bit-exact");
    }
  }
  if (o.pass) o.detail = "100 tensors bit-exact";
  return o;
}

double HighPower(const FeatureTensor& f, const CutoffSpec& c) {
  double s = 0.0;
  for (double v : ComputeBandPower(f, c).high) s += v;
  return s;
}

Outcome BlurTrend() {
  Outcome o;
  const CutoffSpec cutoff(0.25);
  double mean_before = 0.0, mean_after = 0.0;
  const int trials = 24;
  for (int t = 0; t < trials; ++t) {
    const FeatureTensor f = testing::RandomTensor(4, 32, 32, 5000 + t);
    const FeatureTensor b3 = BinomialBlur(f, 3);
    const FeatureTensor b7 = BinomialBlur(f, 7);
    const double before = AliasingScore(f, cutoff);
    const double after = AliasingScore(b3, cutoff);
    mean_before += before / trials;
    mean_after += after / trials;
    if (!(after < before)) o.Fail("trial " + std::to_string(t) + ": 3x3 did not lower the score");
    if (!(HighPower(b7, cutoff) < HighPower(b3, cutoff))) {
      o.Fail("trial " + std::to_string(t) + ": 7x7 did not remove more band power");
    }
  }
  if (o.pass) {
    o.detail = std::to_string(trials) + Fmt(" trials, mean score %.4f -> %.4f", mean_before,
                                            mean_after);
  }
  return o;
}

Outcome NoiseTrend() {
  Outcome o;
  const CutoffSpec cutoff(0.25);
  double mean_before = 0.0, mean_after = 0.0;
  const int trials = 24;
  for (int t = 0; t < trials; ++t) {
    const FeatureTensor f = testing::PinkField(3, 32, 32, 6000 + t);
    const auto [lo, hi] = std::minmax_element(f.data().begin(), f.data().end());
    const FeatureTensor n = AddGaussianNoise(f, 0.05 * (*hi - *lo), 7000 + t);
    const double before = AliasingScore(f, cutoff);
    const double after = AliasingScore(n, cutoff);
    mean_before += before / trials;
    mean_after += after / trials;
    if (!(after > before)) o.Fail("trial " + std::to_string(t) + ": score did not rise");
  }
  if (o.pass) {
    o.detail = std::to_string(trials) + Fmt(" trials, mean score %.4f -> %.4f", mean_before,
                                            mean_after);
  }
  return o;
}

std::optional<double> SetRatio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

Outcome MetricOracle() {
  Outcome o;
  std::mt19937_64 rng(15);
  const int pairs = 12000;
  for (int t = 0; t < pairs && o.pass; ++t) {
    const int h = 1 + static_cast<int>(rng() % 6);
    const int w = 1 + static_cast<int>(rng() % 6);
    const int d = 1 + t % 2;
    std::bernoulli_distribution bit(0.2 + 0.6 * ((rng() % 5) / 4.0));
    BinaryMask p(h, w), g(h, w);
    std::vector<std::int32_t> pl(h * w), gl(h * w);
    for (int i = 0; i < h * w; ++i) {
      p.set(static_cast<std::size_t>(i), bit(rng));
      g.set(static_cast<std::size_t>(i), bit(rng));
      pl[i] = p[i];
      gl[i] = g[i];
    }
    const SetOracle so{h, w};
    const auto ps = so.FromMask(p), gs = so.FromMask(g);
    const auto pd = so.Band(ps, d), gd = so.Band(gs, d);
    const auto overlap = SetOracle::And(pd, gd);
    const auto inner = SetOracle::And(SetOracle::And(pd, ps), SetOracle::And(gd, gs));
    const auto fr = SetOracle::Minus(pd, overlap);
    const auto mg = SetOracle::Minus(gd, overlap);
    const auto bunion = SetOracle::Or(SetOracle::And(pd, ps), SetOracle::And(gd, gs));

    std::optional<double> ferr = SetRatio(fr.size(), pd.size());
    std::optional<double> merr = SetRatio(mg.size(), gd.size());
    std::optional<double> derr;
    if (auto kept = SetRatio(inner.size(), overlap.size())) derr = 1.0 - *kept;
    const std::optional<double> biou = SetRatio(inner.size(), bunion.size());

    // mIoU over the classes present in the ground truth.
    double iou_sum = 0.0;
    int iou_n = 0;
    for (bool cls : {false, true}) {
      SetOracle::PixelSet pc, gc;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (p.at(y, x) == cls) pc.insert({y, x});
          if (g.at(y, x) == cls) gc.insert({y, x});
        }
      }
      if (gc.empty()) continue;
      iou_sum += static_cast<double>(SetOracle::And(pc, gc).size()) /
                 static_cast<double>(SetOracle::Or(pc, gc).size());
      ++iou_n;
    }
    const double miou = iou_sum / iou_n;

    const ErrorBreakdown e = ErrorMetrics(p, g, d);
    const TagMap tags = ClassifyBoundaryPixels(p, g, d);
    const auto lib_miou = Miou(LabelMask(h, w, pl), LabelMask(h, w, gl), 2);
    const std::string where = "pair " + std::to_string(t) + " (" + std::to_string(h) +
                              "x" + std::to_string(w) + ", d=" + std::to_string(d) + ")";
    if (e.ferr != ferr) o.Fail(where + ": FErr");
    if (e.merr != merr) o.Fail(where + ": MErr");
    if (e.derr != derr) o.Fail(where + ": DErr");
    if (BoundaryIou(p, g, d) != biou) o.Fail(where + ": BIoU");
    if (!lib_miou || *lib_miou != miou) o.Fail(where + ": mIoU");
    if (tags.Count(BoundaryTag::kFalseResponse) != fr.size() ||
        tags.Count(BoundaryTag::kMerging) != mg.size() ||
        tags.Count(BoundaryTag::kDisplacement) != overlap.size() - inner.size()) {
      o.Fail(where + ": tag counts");
    }
  }
  if (o.pass) o.detail = std::to_string(pairs) + " random pairs up to 6x6, d in {1,2}, exact";
  return o;
}

Outcome FreqMixReduction() {
  Outcome o;
  std::mt19937_64 rng(16);
  std::normal_distribution<double> logit(0.0, 2.0);
  std::uniform_real_distribution<double> cut(0.05, 0.5);
  double worst_bypass = 0.0, worst_daf = 0.0, worst_ref = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int c = 1 + t % 3;
    const int h = 4 + static_cast<int>(rng() % 9), w = 4 + static_cast<int>(rng() % 9);
    const FeatureTensor f = testing::RandomTensor(c, h, w, 8000 + t);
    const CutoffSpec cutoff(cut(rng));
    worst_bypass = std::max(
        worst_bypass, MaxAbsDiff(FreqMixApply(f, cutoff, FreqMixWeights::Bypass(c, h, w)), f));
    worst_daf = std::max(
        worst_daf, MaxAbsDiff(FreqMixApply(f, cutoff, FreqMixWeights::LowPassOnly(c, h, w)),
                              Daf(f, cutoff)));
    FreqMixWeights wts{std::vector<double>(c), std::vector<double>(c), RealMap(h, w),
                       RealMap(h, w)};
    for (auto* v : {&wts.low_channel, &wts.high_channel, &wts.low_spatial.values,
                    &wts.high_spatial.values}) {
      for (double& x : *v) x = logit(rng);
    }
    const FeatureTensor ref =
        testing::ScalarFreqMix(f, cutoff.value(), wts.low_channel, wts.high_channel,
                               wts.low_spatial, wts.high_spatial);
    worst_ref = std::max(worst_ref, MaxAbsDiff(FreqMixApply(f, cutoff, wts), ref));
  }
  if (worst_bypass >= 1e-9) o.Fail(Fmt("bypass deviation %.3g", worst_bypass));
  if (worst_daf >= 1e-9) o.Fail(Fmt("high-band-off deviation %.3g", worst_daf));
  if (worst_ref >= 1e-9) o.Fail(Fmt("scalar reference deviation %.3g", worst_ref));
  if (o.pass) {
    o.detail = Fmt("bypass %.2e, high-band-off vs daf %.2e", worst_bypass, worst_daf) +
               Fmt(", 50 cases vs scalar loop %.2e", worst_ref);
  }
  return o;
}

Outcome IdentityKernelOrthogonality() {
  Outcome o;
  const OrthogonalityReport r = FilterBankOrthogonality(FilterBank::IdentityKernels(2));
  if (r.similarity.size() != 4) o.Fail("expected 4 filters");
  for (std::size_t i = 0; i < r.similarity.size(); ++i) {
    for (std::size_t j = 0; j < r.similarity.size(); ++j) {
      if (i != j && r.similarity[i][j] != 0.0) o.Fail("nonzero off-diagonal entry");
    }
  }
  if (r.mean_off_diagonal != 0.0) o.Fail("mean off-diagonal is not 0");
  if (o.pass) o.detail = "4x4 similarity, off-diagonal exactly 0";
  return o;
}

// ---- CLI determinism ----------------------------------------------------

std::string ReadBytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string Quote(const std::string& s) { return "'" + s + "'"; }

struct CliCase {
  std::string name;
  std::vector<std::string> args;
  std::vector<std::string> outputs;
};

bool NpyRoundTrips(Outcome* o) {
  std::mt19937_64 rng(17);
  for (DType dt : {DType::kFloat32, DType::kFloat64, DType::kUInt8, DType::kInt32,
                   DType::kUInt16}) {
    NpyArray a;
    a.dtype = dt;
    a.shape = {3, 5, 7};
    for (int i = 0; i < 105; ++i) {
      const double r = std::uniform_real_distribution<double>(-1e5, 1e5)(rng);
      switch (dt) {
        case DType::kFloat32: a.values.push_back(static_cast<float>(r)); break;
        case DType::kFloat64: a.values.push_back(r); break;
        case DType::kUInt8: a.values.push_back(static_cast<double>(rng() % 256)); break;
        case DType::kUInt16: a.values.push_back(static_cast<double>(rng() % 65536)); break;
        default: a.values.push_back(std::floor(r)); break;
      }
    }
    const auto bytes = SerializeNpy(a);
    const NpyArray back = ParseNpy(bytes);
    if (back.values != a.values || back.shape != a.shape || SerializeNpy(back) != bytes) {
      o->Fail("NPY round trip not bit-exact for " + DescrFor(dt));
      return false;
    }
  }
  return true;
}

Outcome CliDeterminism() {
  Outcome o;
  const char* cli = std::getenv("ALIAS_SCOPE_CLI_PATH");
  if (!cli || !fs::exists(cli)) {
    o.Fail("ALIAS_SCOPE_CLI_PATH does not name the alias_scope binary");
    return o;
  }
  if (!NpyRoundTrips(&o)) return o;

  const fs::path dir = fs::temp_directory_path() /
                       ("alias_scope_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto P = [&](const std::string& n) { return (dir / n).string(); };

  SaveArray(testing::PinkField(3, 32, 32, 1), P("f.npy"));
  FeatureTensor f32 = testing::RandomTensor(2, 16, 16, 2);
  f32.set_dtype(DType::kFloat32);
  SaveArray(f32, P("f32.npy"));
  std::vector<std::int32_t> gt(1024), pred(1024);
  FeatureTensor probs(3, 32, 32);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) {
      gt[y * 32 + x] = (x < 12) ? 0 : (y < 16 ? 1 : 2);
      pred[y * 32 + x] = (x < 14) ? 0 : (y < 15 ? 1 : 2);
      for (int c = 0; c < 3; ++c) {
        probs.at(c, y, x) = c == pred[y * 32 + x] ? 0.8 : 0.1;
      }
    }
  }
  gt[0] = 255;
  SaveArray(LabelMask(32, 32, gt), P("gt.npy"));
  SaveArray(LabelMask(32, 32, pred, kDefaultIgnoreValue, DType::kUInt8), P("pred.npy"));
  SaveArray(probs, P("probs.npy"));
  RealMap score_map(16, 16);
  for (std::size_t i = 0; i < score_map.values.size(); ++i) {
    score_map.values[i] = static_cast<double>(i % 97) / 96.0;
  }
  SaveArray(score_map, P("score.npy"));
  fs::create_directories(P("weights"));
  FreqMixWeights wts = FreqMixWeights::Bypass(3, 32, 32);
  wts.high_channel = {-1.0, 0.5, 2.0};
  wts.Save(P("weights"));
  fs::create_directories(P("params"));
  FreqMixParams params = FreqMixParams::Zeros(3);
  params.fc_high_bias = {-2.0, 0.0, 1.0};
  params.conv_low_weight.values[4] = 0.5;
  params.Save(P("params"));
  NpyArray bank;
  bank.dtype = DType::kFloat64;
  bank.shape = {3, 3, 3};
  for (int i = 0; i < 27; ++i) bank.values.push_back(std::sin(1.0 + i));
  WriteNpy(bank, P("bank.npy"));
  SaveArray(BinomialKernel(5), P("kernel.npy"));
  std::ofstream(P("run.toml")) << "[analysis]\nwindow = 16\nstride = 8\nbins = 10\n"
                                  "[metrics]\nd = 2\n[run]\nseed = 4\n";

  const std::vector<CliCase> cases = {
      {"esr", {"esr", "--kernel", "3", "--cin", "64", "--cout", "128", "--stride", "2"}, {}},
      {"score", {"score", P("f.npy"), P("f32.npy"), "--cutoff", "0.25"}, {}},
      {"daf", {"daf", P("f.npy"), "--output", P("daf.npy"), "--flc-stride", "2"}, {P("daf.npy")}},
      {"blur", {"blur", P("f32.npy"), "--output", P("blur.npy"), "--size", "5", "--cutoff", "0.25"},
       {P("blur.npy")}},
      {"noise", {"noise", P("f.npy"), "--output", P("noise.npy"), "--sigma-fraction", "0.05",
                 "--seed", "7", "--cutoff", "0.25"}, {P("noise.npy")}},
      {"freqmix", {"freqmix", P("f.npy"), "--output", P("fm.npy"), "--weights", P("weights")},
       {P("fm.npy")}},
      {"freqmix-params", {"freqmix", P("f.npy"), "--output", P("fp.npy"), "--params",
                          P("params"), "--kernel", "3", "--cin", "3", "--cout", "6",
                          "--stride", "2"}, {P("fp.npy")}},
      {"split", {"split", P("f.npy"), "--low", P("lo.npy"), "--high", P("hi.npy")},
       {P("lo.npy"), P("hi.npy")}},
      {"metrics", {"metrics", P("pred.npy"), P("gt.npy"), "--d", "2"}, {}},
      {"analyze", {"--config", P("run.toml"), "analyze", "--pred", P("pred.npy"), "--gt",
                   P("gt.npy"), "--features", P("f.npy"), "--cutoff", "0.25", "--probs",
                   P("probs.npy")}, {}},
      {"analyze-csv", {"--format", "csv", "analyze", "--pred", P("pred.npy"), "--gt",
                       P("gt.npy"), "--score-map", P("score.npy"), "--d", "3"}, {}},
      {"response", {"response", "--kernel-file", P("kernel.npy"), "--grid", "32", "--output",
                    P("resp.npy")}, {P("resp.npy")}},
      {"orth", {"orth", P("bank.npy")}, {}},
      {"fold", {"fold", "--k", "0.4375", "--stride", "4"}, {}},
  };

  for (const CliCase& c : cases) {
    std::string cmd = Quote(cli);
    for (const auto& a : c.args) cmd += " " + Quote(a);
    std::vector<std::string> first;
    for (int run = 0; run < 2; ++run) {
      for (const auto& out : c.outputs) fs::remove(out);
      const std::string report = P(c.name + std::to_string(run) + ".out");
      const int status = std::system((cmd + " > " + Quote(report) + " 2> " +
                                      Quote(P("stderr.txt")))
                                         .c_str());
      if (status != 0) {
        o.Fail(c.name + ": exit status " + std::to_string(status) + ": " +
               ReadBytes(P("stderr.txt")));
        break;
      }
      std::vector<std::string> bytes = {ReadBytes(report)};
      for (const auto& out : c.outputs) bytes.push_back(ReadBytes(out));
      if (run == 0) {
        first = bytes;
      } else if (bytes != first) {
        o.Fail(c.name + ": outputs differ between runs");
      }
    }
  }

  // A zero-sigma noise pass rewrites the input array unchanged.
  const std::string copy_cmd = Quote(cli) + " noise " + Quote(P("f.npy")) + " --output " +
                               Quote(P("copy.npy")) + " --sigma 0 > /dev/null";
  if (std::system(copy_cmd.c_str()) != 0 ||
      ReadBytes(P("copy.npy")) != ReadBytes(P("f.npy"))) {
    o.Fail("NPY written by the CLI is not a bit-exact copy of its input");
  }
  fs::remove_all(dir);
  if (o.pass) {
    o.detail = std::to_string(cases.size()) +
               " invocations covering all 12 subcommands byte-identical; NPY round trips "
               "bit-exact";
  }
  return o;
}

}  // namespace
}  // namespace alias_scope

int main() {
  using alias_scope::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"fft oracle equivalence", alias_scope::FftOracle},
      {"parseval and conjugate symmetry", alias_scope::ParsevalAndSymmetry},
      {"esr pinned values", alias_scope::EsrPinned},
      {"alias fold law", alias_scope::AliasFold},
      {"daf exactness", alias_scope::DafExactness},
      {"lossless identity-kernel downsampling", alias_scope::SpaceToDepthRoundTrip},
      {"blur trend", alias_scope::BlurTrend},
      {"noise trend", alias_scope::NoiseTrend},
      {"metric oracle equivalence", alias_scope::MetricOracle},
      {"freqmix identity and reduction", alias_scope::FreqMixReduction},
      {"orthogonality pinned case", alias_scope::IdentityKernelOrthogonality},
      {"cli determinism", alias_scope::CliDeterminism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " "
              << criteria[i].first << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
