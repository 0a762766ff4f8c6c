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

// Resolved settings for one command-line run, and the reader for the
// sectioned key = value config file.
#ifndef ALIAS_SCOPE_TOOLS_RUN_CONFIG_H_
#define ALIAS_SCOPE_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "alias_scope/antialias.h"
#include "alias_scope/sampling.h"
#include "alias_scope/segmetrics.h"
#include "json.hpp"

namespace alias_scope::cli {

// Downsampling-layer description used both by `esr` and as a cutoff source.
struct EsrFields {
  std::optional<int> kernel;
  std::optional<int> kernel_h;
  std::optional<int> kernel_w;
  std::optional<int> cin;
  std::optional<int> cout;
  std::optional<int> stride;
  std::optional<int> in_h;
  std::optional<int> in_w;
  std::optional<int> out_h;
  std::optional<int> out_w;

  bool Any() const;
  // Throws ShapeError when a required field is missing or the sizes do not
  // describe a valid layer.
  DownsampleSpec ToSpec() const;
  nlohmann::ordered_json ToJson() const;
};

enum class CutoffSource { kNone, kExplicit, kEsr, kFlc };

struct RunConfig {
  std::optional<double> cutoff;
  EsrFields esr;
  std::optional<int> flc_stride;
  ScoreMode score_mode = ScoreMode::kPerChannelMean;
  // Band width; nullopt means the default 15, `d_auto` scales it with the
  // image size.
  std::optional<int> d;
  bool d_auto = false;
  int window = 32;
  int window_stride = 8;
  int bins = 20;
  // Overrides the per-metric default class set when present.
  std::optional<ClassSet> classes;
  std::optional<int> num_classes;
  std::optional<int> ignore = kDefaultIgnoreValue;
  std::string format = "json";
  std::uint64_t seed = 0;

  // Throws ShapeError when more than one source is given.
  CutoffSource Source() const;
  // Cutoff from the single configured source, or `fallback` when none is
  // configured. Throws ShapeError when neither exists.
  CutoffSpec ResolveCutoff(std::optional<double> fallback = std::nullopt) const;
  void ClearCutoff();
  int BandWidth(int height, int width) const;

  nlohmann::ordered_json ToJson() const;
};

// Applies a config file on top of `config`. Sections and keys:
//   [cutoff]   value, flc_stride
//   [esr]      kernel, kernel_h, kernel_w, cin, cout, stride,
//              in_h, in_w, out_h, out_w
//   [score]    mode
//   [metrics]  d, classes, num_classes, ignore
//   [analysis] window, stride, bins
//   [output]   format
//   [run]      seed
// Throws IoError when unreadable and ValidationError on unknown keys or bad
// values.
void ApplyConfigFile(const std::filesystem::path& path, RunConfig* config);
void ApplyConfigText(const std::string& text, RunConfig* config);

}  // namespace alias_scope::cli

#endif  // ALIAS_SCOPE_TOOLS_RUN_CONFIG_H_
