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

#include "cli.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "alias_scope/analysis.h"
#include "alias_scope/antialias.h"
#include "alias_scope/errors.h"
#include "alias_scope/freqmix.h"
#include "alias_scope/npy.h"
#include "alias_scope/parallel.h"
#include "alias_scope/sampling.h"
#include "alias_scope/segmetrics.h"
#include "alias_scope/spectral.h"
#include "json.hpp"
#include "run_config.h"

namespace alias_scope::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

ordered_json Nullable(std::optional<double> v) {
  return v && std::isfinite(*v) ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json NullableArray(const std::vector<double>& values) {
  ordered_json a = ordered_json::array();
  for (double v : values) a.push_back(Nullable(v));
  return a;
}

// Everything the command line can set. Optional fields override the config
// file only when given.
struct Flags {
  std::string out;
  std::optional<std::string> format;
  std::string config;
  std::optional<std::uint64_t> seed;

  std::optional<double> cutoff;
  EsrFields esr;
  std::optional<int> flc_stride;
  std::optional<std::string> mode;

  std::optional<std::string> d;
  std::optional<std::string> classes;
  std::optional<int> num_classes;
  std::optional<std::string> ignore;
  std::optional<int> window;
  std::optional<int> window_stride;
  std::optional<int> bins;

  std::vector<std::string> inputs;
  std::string input;
  std::string output;
  std::string pred;
  std::string gt;
  std::string features;
  std::string score_map;
  std::string probs;
  int size = 3;
  std::string padding = "reflect";
  std::optional<double> sigma;
  std::optional<double> sigma_fraction;
  std::string weights_dir;
  std::string params_dir;
  std::string preset;
  std::string low;
  std::string high;
  std::string kernel_file;
  std::string builtin;
  int grid = 64;
  int identity_block = 0;
  double k = 0.0;
  int fold_stride = 2;
};

class Session {
 public:
  Session(std::string command, RunConfig config)
      : command_(std::move(command)), config_(std::move(config)) {}

  const RunConfig& config() const { return config_; }

  const fs::path& Input(const std::string& path) {
    inputs_.push_back({{"path", path}, {"sha256", FileSha256(path)}});
    paths_.emplace_back(path);
    return paths_.back();
  }
  // Records every regular file of a directory in name order.
  void InputDir(const std::string& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) Input(f.string());
  }
  void Output(const std::string& path) {
    outputs_.push_back({{"path", path}, {"sha256", FileSha256(path)}});
  }
  void SaveTensor(FeatureTensor t, const std::string& path, DType like) {
    if (IsFloating(like)) t.set_dtype(like);
    SaveArray(t, path);
    Output(path);
  }

  ordered_json Report(ordered_json result) const {
    ordered_json j;
    j["tool"] = "alias_scope";
    j["version"] = kToolVersion;
    j["command"] = command_;
    j["config"] = config_.ToJson();
    j["inputs"] = inputs_;
    if (!outputs_.empty()) j["outputs"] = outputs_;
    j["result"] = std::move(result);
    return j;
  }

 private:
  std::string command_;
  RunConfig config_;
  ordered_json inputs_ = ordered_json::array();
  ordered_json outputs_ = ordered_json::array();
  std::vector<fs::path> paths_;
};

ordered_json CutoffJson(const CutoffSpec& c) { return c.value(); }

ordered_json ScoreBlock(const FeatureTensor& f, const CutoffSpec& cutoff,
                        ScoreMode mode) {
  const BandPower power = ComputeBandPower(f, cutoff);
  auto safe = [&](ScoreMode m) -> std::optional<double> {
    try {
      return AliasingScore(power, m);
    } catch (const UndefinedRatioError&) {
      return std::nullopt;
    }
  };
  ordered_json j;
  j["score"] = Nullable(safe(mode));
  j["score_per_channel_mean"] = Nullable(safe(ScoreMode::kPerChannelMean));
  j["score_global"] = Nullable(safe(ScoreMode::kGlobal));
  j["channel_scores"] = NullableArray(ChannelAliasingScores(power));
  j["high_power"] = power.high;
  j["total_power"] = power.total;
  return j;
}

// Score before and after a transform when a cutoff source is configured.
void AttachScores(const RunConfig& cfg, const FeatureTensor& before,
                  const FeatureTensor& after, ordered_json* result) {
  if (cfg.Source() == CutoffSource::kNone) return;
  const CutoffSpec c = cfg.ResolveCutoff();
  (*result)["cutoff"] = c.value();
  (*result)["score_before"] = ScoreBlock(before, c, cfg.score_mode)["score"];
  (*result)["score_after"] = ScoreBlock(after, c, cfg.score_mode)["score"];
}

int InferNumClasses(const LabelMask& a, const LabelMask& b) {
  int top = -1;
  for (const LabelMask* m : {&a, &b}) {
    for (std::size_t i = 0; i < m->size(); ++i) {
      if (!m->IsIgnored(i)) top = std::max(top, m->labels()[i]);
    }
  }
  return std::max(1, top + 1);
}

RealMap ToRealMap(const FeatureTensor& t) {
  if (t.channels() != 1) {
    throw ShapeError("score map must be a 2D array, got " +
                     std::to_string(t.channels()) + " channels");
  }
  RealMap m(t.height(), t.width());
  m.values = t.data();
  return m;
}

ordered_json RealMapJson(const RealMap& m) {
  ordered_json rows = ordered_json::array();
  for (int y = 0; y < m.height; ++y) {
    ordered_json row = ordered_json::array();
    for (int x = 0; x < m.width; ++x) row.push_back(m.at(y, x));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json ErrorsJson(const ErrorBreakdown& e) {
  ordered_json j;
  j["ferr"] = Nullable(e.ferr);
  j["merr"] = Nullable(e.merr);
  j["derr"] = Nullable(e.derr);
  j["counts"] = {{"pred_band", e.counts.pred_band},
                 {"gt_band", e.counts.gt_band},
                 {"false_response", e.counts.false_response},
                 {"merging", e.counts.merging},
                 {"band_overlap", e.counts.band_overlap},
                 {"inner_overlap", e.counts.inner_overlap}};
  return j;
}

ordered_json CurveJson(const BinnedCurve& curve, bool with_tags) {
  ordered_json bins = ordered_json::array();
  for (const BinStats& b : curve.bins) {
    ordered_json j;
    j["lower"] = b.lower;
    j["upper"] = b.upper;
    j["count"] = b.count;
    j["mean"] = Nullable(b.mean);
    if (with_tags) {
      j["false_response"] = b.false_response;
      j["merging"] = b.merging;
      j["displacement"] = b.displacement;
    }
    bins.push_back(std::move(j));
  }
  return bins;
}

std::string CsvNumber(std::optional<double> v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", *v);
  return buf;
}

// ---- subcommands -------------------------------------------------------

ordered_json CmdEsr(Session& s) {
  const DownsampleSpec spec = s.config().esr.ToSpec();
  const AnisotropicEsr an = EsrAnisotropic(spec);
  ordered_json r;
  r["spec"] = {{"kernel_h", spec.kernel_h}, {"kernel_w", spec.kernel_w},
               {"in_channels", spec.in_channels}, {"out_channels", spec.out_channels},
               {"in_h", spec.in_h},         {"in_w", spec.in_w},
               {"out_h", spec.out_h},       {"out_w", spec.out_w}};
  r["esr"] = Esr(spec);
  r["esr_anisotropic"] = {{"height", an.height}, {"width", an.width}};
  r["nyquist"] = Nyquist(spec);
  r["kernel_smaller_than_stride"] = spec.KernelSmallerThanStride();
  return r;
}

ordered_json CmdScore(Session& s, const Flags& flags) {
  const CutoffSpec cutoff = s.config().ResolveCutoff();
  std::vector<fs::path> paths;
  for (const auto& p : flags.inputs) paths.push_back(s.Input(p));
  std::vector<ordered_json> results(paths.size());
  const ScoreMode mode = s.config().score_mode;
  ParallelFor(paths.size(), [&](std::size_t i) {
    ordered_json j;
    j["path"] = flags.inputs[i];
    j.update(ScoreBlock(LoadFeatureTensor(paths[i]), cutoff, mode));
    results[i] = std::move(j);
  });
  ordered_json r;
  r["cutoff"] = CutoffJson(cutoff);
  r["mode"] = ScoreModeName(mode);
  r["results"] = results;
  return r;
}

ordered_json CmdDaf(Session& s, const Flags& flags) {
  const CutoffSpec cutoff = s.config().ResolveCutoff();
  const FeatureTensor f = LoadFeatureTensor(s.Input(flags.input));
  const DafResult d = DafWithResidue(f, cutoff);
  s.SaveTensor(d.output, flags.output, f.dtype());
  ordered_json r;
  r["cutoff"] = CutoffJson(cutoff);
  r["max_imag_residue"] = d.max_imag_residue;
  r["score_before"] = ScoreBlock(f, cutoff, s.config().score_mode)["score"];
  r["score_after"] = ScoreBlock(d.output, cutoff, s.config().score_mode)["score"];
  return r;
}

ordered_json CmdBlur(Session& s, const Flags& flags) {
  const FeatureTensor f = LoadFeatureTensor(s.Input(flags.input));
  const Padding padding = ParsePadding(flags.padding);
  const FeatureTensor out = BinomialBlur(f, flags.size, padding);
  s.SaveTensor(out, flags.output, f.dtype());
  ordered_json r;
  r["size"] = flags.size;
  r["padding"] = PaddingName(padding);
  r["kernel_1d"] = BinomialKernel1d(flags.size);
  AttachScores(s.config(), f, out, &r);
  return r;
}

ordered_json CmdNoise(Session& s, const Flags& flags) {
  const FeatureTensor f = LoadFeatureTensor(s.Input(flags.input));
  if (flags.sigma.has_value() == flags.sigma_fraction.has_value()) {
    throw ShapeError("noise: give exactly one of --sigma and --sigma-fraction");
  }
  double sigma = flags.sigma.value_or(0.0);
  if (flags.sigma_fraction) {
    const auto [lo, hi] = std::minmax_element(f.data().begin(), f.data().end());
    sigma = *flags.sigma_fraction * (f.size() ? *hi - *lo : 0.0);
  }
  const FeatureTensor out = AddGaussianNoise(f, sigma, s.config().seed);
  s.SaveTensor(out, flags.output, f.dtype());
  ordered_json r;
  r["sigma"] = sigma;
  r["seed"] = s.config().seed;
  AttachScores(s.config(), f, out, &r);
  return r;
}

ordered_json CmdFreqMix(Session& s, const Flags& flags) {
  const CutoffSpec cutoff = s.config().ResolveCutoff(0.25);
  const FeatureTensor f = LoadFeatureTensor(s.Input(flags.input));
  const int given = !flags.weights_dir.empty() + !flags.params_dir.empty() +
                    !flags.preset.empty();
  if (given != 1) {
    throw ShapeError("freqmix: give exactly one of --weights, --params and --preset");
  }
  FreqMixWeights w;
  std::string source;
  if (!flags.weights_dir.empty()) {
    s.InputDir(flags.weights_dir);
    w = FreqMixWeights::Load(flags.weights_dir);
    source = "weights";
  } else if (!flags.params_dir.empty()) {
    s.InputDir(flags.params_dir);
    w = FreqMixPredictWeights(f, FreqMixParams::Load(flags.params_dir));
    source = "params";
  } else if (flags.preset == "bypass") {
    w = FreqMixWeights::Bypass(f.channels(), f.height(), f.width());
    source = "bypass";
  } else if (flags.preset == "low_pass_only") {
    w = FreqMixWeights::LowPassOnly(f.channels(), f.height(), f.width());
    source = "low_pass_only";
  } else {
    throw ShapeError("freqmix: unknown preset '" + flags.preset + "'");
  }
  const FeatureTensor out = FreqMixApply(f, cutoff, w);
  s.SaveTensor(out, flags.output, f.dtype());
  std::vector<double> lc, hc;
  for (double v : w.low_channel) lc.push_back(Sigmoid(v));
  for (double v : w.high_channel) hc.push_back(Sigmoid(v));
  ordered_json r;
  r["cutoff"] = CutoffJson(cutoff);
  r["weights_source"] = source;
  r["low_channel_weights"] = lc;
  r["high_channel_weights"] = hc;
  r["score_before"] = ScoreBlock(f, cutoff, s.config().score_mode)["score"];
  r["score_after"] = ScoreBlock(out, cutoff, s.config().score_mode)["score"];
  return r;
}

ordered_json CmdSplit(Session& s, const Flags& flags) {
  const CutoffSpec cutoff = s.config().ResolveCutoff(0.25);
  const FeatureTensor f = LoadFeatureTensor(s.Input(flags.input));
  const FrequencySplitResult parts = FrequencySplit(f, cutoff);
  s.SaveTensor(parts.low, flags.low, f.dtype());
  s.SaveTensor(parts.high, flags.high, f.dtype());
  ordered_json r;
  r["cutoff"] = CutoffJson(cutoff);
  return r;
}

ordered_json CmdMetrics(Session& s, const Flags& flags) {
  const RunConfig& cfg = s.config();
  const LabelMask pred = LoadLabelMask(s.Input(flags.pred), cfg.ignore);
  const LabelMask gt = LoadLabelMask(s.Input(flags.gt), cfg.ignore);
  const int nc = cfg.num_classes.value_or(InferNumClasses(pred, gt));
  const int d = cfg.BandWidth(gt.height(), gt.width());
  const ClassSet iou_set = cfg.classes.value_or(ClassSet::kPresentInGt);
  const ClassSet err_set = cfg.classes.value_or(ClassSet::kPresentInEither);
  const IouReport iou = ComputeIou(pred, gt, nc, iou_set);
  const MulticlassErrorReport errs = MulticlassErrors(pred, gt, d, nc, err_set);

  ordered_json r;
  r["num_classes"] = nc;
  r["d"] = d;
  r["iou_classes"] = ClassSetName(iou_set);
  r["error_classes"] = ClassSetName(err_set);
  r["miou"] = Nullable(iou.miou);
  r["mean_ferr"] = Nullable(errs.mean_ferr);
  r["mean_merr"] = Nullable(errs.mean_merr);
  r["mean_derr"] = Nullable(errs.mean_derr);
  r["mean_derr_perfect_baseline"] = Nullable(errs.mean_derr_perfect_baseline);
  r["mean_biou"] = Nullable(errs.mean_biou);
  r["mean_bacc"] = Nullable(errs.mean_bacc);
  ordered_json iou_rows = ordered_json::array();
  for (int c = 0; c < nc; ++c) {
    iou_rows.push_back({{"class_id", c}, {"iou", Nullable(iou.per_class[c])}});
  }
  r["iou"] = iou_rows;
  ordered_json per_class = ordered_json::array();
  for (const ClassErrors& c : errs.per_class) {
    ordered_json j;
    j["class_id"] = c.class_id;
    j.update(ErrorsJson(c.errors));
    j["derr_perfect_baseline"] = Nullable(c.derr_perfect_baseline);
    j["biou"] = Nullable(c.biou);
    j["bacc"] = Nullable(c.bacc);
    per_class.push_back(std::move(j));
  }
  r["per_class"] = per_class;
  return r;
}

struct AnalyzeOutput {
  ordered_json json;
  std::string csv;
};

AnalyzeOutput CmdAnalyze(Session& s, const Flags& flags) {
  const RunConfig& cfg = s.config();
  if (flags.features.empty() == flags.score_map.empty()) {
    throw ShapeError("analyze: give exactly one of --features and --score-map");
  }
  const LabelMask pred = LoadLabelMask(s.Input(flags.pred), cfg.ignore);
  const LabelMask gt = LoadLabelMask(s.Input(flags.gt), cfg.ignore);
  ScoreMap score;
  if (!flags.features.empty()) {
    const CutoffSpec cutoff = cfg.ResolveCutoff();
    score = PatchAliasingMap(LoadFeatureTensor(s.Input(flags.features)),
                             cfg.window, cfg.window_stride, cutoff);
  } else {
    score = ScoreMapFromValues(ToRealMap(LoadFeatureTensor(s.Input(flags.score_map))));
  }
  const int source_h = score.height, source_w = score.width;
  if (score.height != gt.height() || score.width != gt.width()) {
    score = ResizeScoreMap(score, gt.height(), gt.width());
  }
  const int nc = cfg.num_classes.value_or(InferNumClasses(pred, gt));
  const int d = cfg.BandWidth(gt.height(), gt.width());
  const ClassSet set = cfg.classes.value_or(ClassSet::kPresentInEither);
  const BinnedCurve errors =
      ErrorTypeDistribution(pred, gt, score, d, cfg.bins, nc, set);
  std::optional<BinnedCurve> ce;
  if (!flags.probs.empty()) {
    const FeatureTensor probs = LoadFeatureTensor(s.Input(flags.probs));
    ce = BinByScore(score, PixelCrossEntropy(probs, gt),
                    GroundTruthBoundary(gt, d, nc), cfg.bins);
  }

  ordered_json r;
  ordered_json meta;
  meta["source"] = score.source;
  meta["window"] = score.window;
  meta["stride"] = score.stride;
  meta["cutoff"] = score.cutoff;
  meta["height"] = source_h;
  meta["width"] = source_w;
  meta["resized"] = source_h != gt.height() || source_w != gt.width();
  r["score_map"] = meta;
  r["num_classes"] = nc;
  r["d"] = d;
  r["classes"] = ClassSetName(set);
  r["bins"] = cfg.bins;
  r["error_distribution"] = CurveJson(errors, true);
  if (ce) r["ce_boundary"] = CurveJson(*ce, false);

  std::ostringstream csv;
  csv << "bin,lower,upper,count,mean,false_response,merging,displacement";
  if (ce) csv << ",ce_count,ce_mean";
  csv << "\n";
  for (std::size_t i = 0; i < errors.bins.size(); ++i) {
    const BinStats& b = errors.bins[i];
    csv << i << ',' << CsvNumber(b.lower) << ',' << CsvNumber(b.upper) << ','
        << b.count << ',' << CsvNumber(b.mean) << ',' << b.false_response << ','
        << b.merging << ',' << b.displacement;
    if (ce) csv << ',' << ce->bins[i].count << ',' << CsvNumber(ce->bins[i].mean);
    csv << "\n";
  }
  return {r, csv.str()};
}

ordered_json CmdResponse(Session& s, const Flags& flags) {
  if (flags.kernel_file.empty() == flags.builtin.empty()) {
    throw ShapeError("response: give exactly one of --kernel-file and --builtin");
  }
  RealMap kernel;
  std::string name;
  if (!flags.kernel_file.empty()) {
    kernel = ToRealMap(LoadFeatureTensor(s.Input(flags.kernel_file)));
    name = flags.kernel_file;
  } else {
    name = flags.builtin;
    if (name == "binomial3") {
      kernel = BinomialKernel(3);
    } else if (name == "binomial5") {
      kernel = BinomialKernel(5);
    } else if (name == "binomial7") {
      kernel = BinomialKernel(7);
    } else if (name == "identity") {
      kernel = RealMap(1, 1, 1.0);
    } else {
      throw ShapeError("response: unknown builtin '" + name +
                       "' (binomial3, binomial5, binomial7, identity)");
    }
  }
  const RealMap map = FilterFrequencyResponse(kernel, flags.grid);
  if (!flags.output.empty()) {
    SaveArray(map, flags.output);
    s.Output(flags.output);
  }
  ordered_json r;
  r["kernel"] = name;
  r["grid"] = flags.grid;
  r["dc_value"] = map.at(flags.grid / 2, flags.grid / 2);
  r["map"] = RealMapJson(map);
  return r;
}

ordered_json CmdOrth(Session& s, const Flags& flags) {
  if (flags.input.empty() == (flags.identity_block == 0)) {
    throw ShapeError("orth: give exactly one of a bank file and --identity-block");
  }
  const FilterBank bank = flags.input.empty()
                              ? FilterBank::IdentityKernels(flags.identity_block)
                              : FilterBank::FromNpy(ReadNpy(s.Input(flags.input)));
  const OrthogonalityReport rep = FilterBankOrthogonality(bank);
  ordered_json r;
  r["filters"] = bank.filters.size();
  r["filter_length"] = bank.filters.front().size();
  r["mean_off_diagonal"] = rep.mean_off_diagonal;
  r["similarity"] = rep.similarity;
  return r;
}

ordered_json CmdFold(const Flags& flags) {
  ordered_json r;
  r["k"] = flags.k;
  r["stride"] = flags.fold_stride;
  r["alias_frequency"] = PredictedAliasFrequency(flags.k, flags.fold_stride);
  return r;
}

// ---- wiring ------------------------------------------------------------

void AddCutoffFlags(CLI::App* sub, Flags* f) {
  sub->add_option("--cutoff", f->cutoff, "Explicit cutoff in (0, 0.5]");
  sub->add_option("--flc-stride", f->flc_stride, "Cutoff 1 / (2 * stride)");
  sub->add_option("--kernel", f->esr.kernel, "ESR cutoff: square kernel size");
  sub->add_option("--kernel-h", f->esr.kernel_h, "ESR cutoff: kernel height");
  sub->add_option("--kernel-w", f->esr.kernel_w, "ESR cutoff: kernel width");
  sub->add_option("--cin", f->esr.cin, "ESR cutoff: input channels");
  sub->add_option("--cout", f->esr.cout, "ESR cutoff: output channels");
  sub->add_option("--stride", f->esr.stride, "ESR cutoff: stride");
  sub->add_option("--in-h", f->esr.in_h, "ESR cutoff: input height");
  sub->add_option("--in-w", f->esr.in_w, "ESR cutoff: input width");
  sub->add_option("--out-h", f->esr.out_h, "ESR cutoff: output height");
  sub->add_option("--out-w", f->esr.out_w, "ESR cutoff: output width");
  sub->add_option("--mode", f->mode, "Score mode: per_channel_mean or global");
}

void AddMetricFlags(CLI::App* sub, Flags* f) {
  sub->add_option("--d", f->d, "Band width in pixels, or 'auto'");
  sub->add_option("--classes", f->classes, "Class set: gt or either");
  sub->add_option("--num-classes", f->num_classes, "Number of classes");
  sub->add_option("--ignore", f->ignore, "Ignore label, or 'none'");
}

RunConfig Resolve(const Flags& f) {
  RunConfig cfg;
  if (!f.config.empty()) ApplyConfigFile(f.config, &cfg);
  if (f.cutoff || f.flc_stride || f.esr.Any()) {
    cfg.ClearCutoff();
    cfg.cutoff = f.cutoff;
    cfg.flc_stride = f.flc_stride;
    cfg.esr = f.esr;
  }
  if (f.mode) cfg.score_mode = ParseScoreMode(*f.mode);
  if (f.d) {
    cfg.d_auto = *f.d == "auto";
    if (!cfg.d_auto) {
      try {
        cfg.d = std::stoi(*f.d);
      } catch (const std::exception&) {
        throw ValidationError("--d expects an integer or 'auto'");
      }
    }
  }
  if (f.classes) cfg.classes = ParseClassSet(*f.classes);
  if (f.num_classes) cfg.num_classes = f.num_classes;
  if (f.ignore) {
    if (*f.ignore == "none") {
      cfg.ignore.reset();
    } else {
      try {
        cfg.ignore = std::stoi(*f.ignore);
      } catch (const std::exception&) {
        throw ValidationError("--ignore expects an integer or 'none'");
      }
    }
  }
  if (f.window) cfg.window = *f.window;
  if (f.window_stride) cfg.window_stride = *f.window_stride;
  if (f.bins) cfg.bins = *f.bins;
  if (f.format) cfg.format = *f.format;
  if (f.seed) cfg.seed = *f.seed;
  if (cfg.format != "json" && cfg.format != "csv") {
    throw ValidationError("--format must be json or csv");
  }
  cfg.Source();  // rejects conflicting cutoff sources early
  return cfg;
}

void Emit(const std::string& text, const Flags& flags, std::ostream& out) {
  if (flags.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(flags.out, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write " + flags.out);
  file << text;
  if (!file) throw IoError("write failed: " + flags.out);
}

int Dispatch(CLI::App& app, const Flags& flags, std::ostream& out) {
  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  const RunConfig cfg = Resolve(flags);
  if (cfg.format == "csv" && name != "analyze") {
    throw ValidationError("--format csv is only available for analyze");
  }
  Session session(name, cfg);
  ordered_json result;
  std::string csv;
  if (name == "esr") {
    result = CmdEsr(session);
  } else if (name == "score") {
    result = CmdScore(session, flags);
  } else if (name == "daf") {
    result = CmdDaf(session, flags);
  } else if (name == "blur") {
    result = CmdBlur(session, flags);
  } else if (name == "noise") {
    result = CmdNoise(session, flags);
  } else if (name == "freqmix") {
    result = CmdFreqMix(session, flags);
  } else if (name == "split") {
    result = CmdSplit(session, flags);
  } else if (name == "metrics") {
    result = CmdMetrics(session, flags);
  } else if (name == "analyze") {
    AnalyzeOutput a = CmdAnalyze(session, flags);
    result = std::move(a.json);
    csv = std::move(a.csv);
  } else if (name == "response") {
    result = CmdResponse(session, flags);
  } else if (name == "orth") {
    result = CmdOrth(session, flags);
  } else if (name == "fold") {
    result = CmdFold(flags);
  }
  if (cfg.format == "csv") {
    Emit(csv, flags, out);
  } else {
    Emit(session.Report(std::move(result)).dump(2) + "\n", flags, out);
  }
  return kExitOk;
}

}  // namespace

std::string FileSha256(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw InvariantError("SHA-256 initialisation failed");
  }
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) {
      EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 15];
  }
  return hex;
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  Flags f;
  CLI::App app{"Aliasing analysis for feature maps and segmentation boundaries",
               "alias_scope"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", f.out, "Write the report to this file");
  app.add_option("--format", f.format, "Report format: json or csv (analyze only)");
  app.add_option("--config", f.config, "Config file with [section] key = value lines");
  app.add_option("--seed", f.seed, "Random seed");

  CLI::App* esr = app.add_subcommand("esr", "Equivalent sampling rate of a layer");
  esr->add_option("--kernel", f.esr.kernel, "Square kernel size");
  esr->add_option("--kernel-h", f.esr.kernel_h, "Kernel height");
  esr->add_option("--kernel-w", f.esr.kernel_w, "Kernel width");
  esr->add_option("--cin", f.esr.cin, "Input channels");
  esr->add_option("--cout", f.esr.cout, "Output channels");
  esr->add_option("--stride", f.esr.stride, "Stride");
  esr->add_option("--in-h", f.esr.in_h, "Input height");
  esr->add_option("--in-w", f.esr.in_w, "Input width");
  esr->add_option("--out-h", f.esr.out_h, "Output height");
  esr->add_option("--out-w", f.esr.out_w, "Output width");

  CLI::App* score = app.add_subcommand("score", "Aliasing score of feature tensors");
  score->add_option("inputs", f.inputs, "Feature tensors (.npy)")->required();
  AddCutoffFlags(score, &f);

  CLI::App* daf = app.add_subcommand("daf", "Remove the aliasing band");
  daf->add_option("input", f.input, "Feature tensor (.npy)")->required();
  daf->add_option("--output", f.output, "Output tensor (.npy)")->required();
  AddCutoffFlags(daf, &f);

  CLI::App* blur = app.add_subcommand("blur", "Binomial blur");
  blur->add_option("input", f.input, "Feature tensor (.npy)")->required();
  blur->add_option("--output", f.output, "Output tensor (.npy)")->required();
  blur->add_option("--size", f.size, "Kernel size: 3, 5 or 7");
  blur->add_option("--padding", f.padding, "reflect or circular");
  AddCutoffFlags(blur, &f);

  CLI::App* noise = app.add_subcommand("noise", "Add Gaussian noise");
  noise->add_option("input", f.input, "Feature tensor (.npy)")->required();
  noise->add_option("--output", f.output, "Output tensor (.npy)")->required();
  noise->add_option("--sigma", f.sigma, "Noise standard deviation");
  noise->add_option("--sigma-fraction", f.sigma_fraction,
                    "Noise standard deviation as a fraction of the value range");
  AddCutoffFlags(noise, &f);

  CLI::App* freqmix = app.add_subcommand("freqmix", "Frequency mixing");
  freqmix->add_option("input", f.input, "Feature tensor (.npy)")->required();
  freqmix->add_option("--output", f.output, "Output tensor (.npy)")->required();
  freqmix->add_option("--weights", f.weights_dir, "Directory of weight logits");
  freqmix->add_option("--params", f.params_dir, "Directory of predictor parameters");
  freqmix->add_option("--preset", f.preset, "bypass or low_pass_only");
  AddCutoffFlags(freqmix, &f);

  CLI::App* split = app.add_subcommand("split", "Split into low and high bands");
  split->add_option("input", f.input, "Feature tensor (.npy)")->required();
  split->add_option("--low", f.low, "Low band output (.npy)")->required();
  split->add_option("--high", f.high, "High band output (.npy)")->required();
  AddCutoffFlags(split, &f);

  CLI::App* metrics = app.add_subcommand("metrics", "Segmentation and boundary metrics");
  metrics->add_option("pred", f.pred, "Predicted labels (.npy)")->required();
  metrics->add_option("gt", f.gt, "Ground-truth labels (.npy)")->required();
  AddMetricFlags(metrics, &f);

  CLI::App* analyze = app.add_subcommand("analyze", "Error types versus local aliasing");
  analyze->add_option("--pred", f.pred, "Predicted labels (.npy)")->required();
  analyze->add_option("--gt", f.gt, "Ground-truth labels (.npy)")->required();
  analyze->add_option("--features", f.features, "Feature tensor for patch scoring");
  analyze->add_option("--score-map", f.score_map, "Precomputed score map in [0, 1]");
  analyze->add_option("--probs", f.probs, "Class probabilities for the CE curve");
  analyze->add_option("--window", f.window, "Patch size");
  analyze->add_option("--window-stride", f.window_stride, "Patch step");
  analyze->add_option("--bins", f.bins, "Number of score bins");
  AddCutoffFlags(analyze, &f);
  AddMetricFlags(analyze, &f);

  CLI::App* response = app.add_subcommand("response", "Filter frequency response");
  response->add_option("--kernel-file", f.kernel_file, "2D kernel (.npy)");
  response->add_option("--builtin", f.builtin,
                       "binomial3, binomial5, binomial7 or identity");
  response->add_option("--grid", f.grid, "Grid size");
  response->add_option("--output", f.output, "Also write the map (.npy)");

  CLI::App* orth = app.add_subcommand("orth", "Filter-bank orthogonality");
  orth->add_option("bank", f.input, "Filter bank (.npy)");
  orth->add_option("--identity-block", f.identity_block,
                   "Use the one-hot block x block kernels");

  CLI::App* fold = app.add_subcommand("fold", "Predicted alias frequency of a tone");
  fold->add_option("--k", f.k, "Tone frequency in [0, 0.5]")->required();
  fold->add_option("--stride", f.fold_stride, "Subsampling stride");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    return Dispatch(app, f, out);
  } catch (const InvariantError& e) {
    err << "alias_scope: internal invariant failed: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    err << "alias_scope: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace alias_scope::cli
