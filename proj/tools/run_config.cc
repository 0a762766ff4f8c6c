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

#include "run_config.h"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "alias_scope/errors.h"

namespace alias_scope::cli {
namespace {

using nlohmann::ordered_json;

template <typename T>
ordered_json OrNull(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string Unquote(std::string_view s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') &&
      s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

// Drops a trailing # comment that is not inside quotes.
std::string_view StripComment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quote) {
      if (ch == quote) quote = 0;
    } else if (ch == '"' || ch == '\'') {
      quote = ch;
    } else if (ch == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("config key '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

}  // namespace

bool EsrFields::Any() const {
  return kernel || kernel_h || kernel_w || cin || cout || stride || in_h ||
         in_w || out_h || out_w;
}

DownsampleSpec EsrFields::ToSpec() const {
  DownsampleSpec spec;
  const auto kh = kernel_h ? kernel_h : kernel;
  const auto kw = kernel_w ? kernel_w : kernel;
  if (!kh || !kw) throw ShapeError("esr: --kernel (or --kernel-h and --kernel-w) is required");
  if (!cin || !cout) throw ShapeError("esr: --cin and --cout are required");
  spec.kernel_h = *kh;
  spec.kernel_w = *kw;
  spec.in_channels = *cin;
  spec.out_channels = *cout;
  const bool sizes = in_h || in_w || out_h || out_w;
  if (sizes) {
    if (!(in_h && in_w && out_h && out_w)) {
      throw ShapeError("esr: --in-h, --in-w, --out-h and --out-w go together");
    }
    spec.in_h = *in_h;
    spec.in_w = *in_w;
    spec.out_h = *out_h;
    spec.out_w = *out_w;
    spec.Validate();
    if (stride && (spec.stride_h() != *stride || spec.stride_w() != *stride)) {
      throw ShapeError("esr: --stride " + std::to_string(*stride) +
                       " disagrees with the given sizes");
    }
  } else {
    if (!stride) throw ShapeError("esr: --stride or explicit sizes are required");
    spec.in_h = spec.in_w = *stride;
    spec.out_h = spec.out_w = 1;
  }
  spec.Validate();
  return spec;
}

ordered_json EsrFields::ToJson() const {
  ordered_json j;
  j["kernel"] = OrNull(kernel);
  j["kernel_h"] = OrNull(kernel_h);
  j["kernel_w"] = OrNull(kernel_w);
  j["cin"] = OrNull(cin);
  j["cout"] = OrNull(cout);
  j["stride"] = OrNull(stride);
  j["in_h"] = OrNull(in_h);
  j["in_w"] = OrNull(in_w);
  j["out_h"] = OrNull(out_h);
  j["out_w"] = OrNull(out_w);
  return j;
}

CutoffSource RunConfig::Source() const {
  const int n = (cutoff ? 1 : 0) + (esr.Any() ? 1 : 0) + (flc_stride ? 1 : 0);
  if (n > 1) {
    throw ShapeError(
        "give exactly one cutoff source: --cutoff, the esr fields or --flc-stride");
  }
  if (cutoff) return CutoffSource::kExplicit;
  if (esr.Any()) return CutoffSource::kEsr;
  if (flc_stride) return CutoffSource::kFlc;
  return CutoffSource::kNone;
}

CutoffSpec RunConfig::ResolveCutoff(std::optional<double> fallback) const {
  switch (Source()) {
    case CutoffSource::kExplicit:
      return CutoffSpec(*cutoff);
    case CutoffSource::kEsr:
      return CutoffSpec(Nyquist(esr.ToSpec()));
    case CutoffSource::kFlc:
      return FlcCutoff(*flc_stride);
    case CutoffSource::kNone:
      break;
  }
  if (!fallback) {
    throw ShapeError(
        "a cutoff is required: --cutoff, the esr fields or --flc-stride");
  }
  return CutoffSpec(*fallback);
}

void RunConfig::ClearCutoff() {
  cutoff.reset();
  esr = EsrFields{};
  flc_stride.reset();
}

int RunConfig::BandWidth(int height, int width) const {
  if (d_auto) return ScaledBandWidth(height, width);
  return d.value_or(kDefaultBandWidth);
}

ordered_json RunConfig::ToJson() const {
  static constexpr const char* kSourceNames[] = {"none", "explicit", "esr", "flc"};
  ordered_json j;
  ordered_json c;
  c["source"] = kSourceNames[static_cast<int>(Source())];
  c["value"] = OrNull(cutoff);
  c["esr"] = esr.ToJson();
  c["flc_stride"] = OrNull(flc_stride);
  j["cutoff"] = c;
  j["score_mode"] = ScoreModeName(score_mode);
  if (d_auto) {
    j["d"] = "auto";
  } else {
    j["d"] = d.value_or(kDefaultBandWidth);
  }
  j["window"] = window;
  j["window_stride"] = window_stride;
  j["bins"] = bins;
  j["classes"] = classes ? ordered_json(ClassSetName(*classes)) : ordered_json(nullptr);
  j["num_classes"] = OrNull(num_classes);
  j["ignore"] = OrNull(ignore);
  j["format"] = format;
  j["seed"] = seed;
  return j;
}

void ApplyConfigText(const std::string& text, RunConfig* config) {
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = Trim(StripComment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ValidationError("config line " + std::to_string(line_no) +
                              ": unterminated section header");
      }
      section = std::string(Trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": expected key = value");
    }
    const std::string key =
        section + "." + std::string(Trim(line.substr(0, eq)));
    const std::string value = Unquote(Trim(line.substr(eq + 1)));
    auto as_int = [&] { return ParseNumber<int>(key, value); };

    RunConfig& c = *config;
    if (key == "cutoff.value") {
      c.cutoff = ParseNumber<double>(key, value);
    } else if (key == "cutoff.flc_stride") {
      c.flc_stride = as_int();
    } else if (key == "esr.kernel") {
      c.esr.kernel = as_int();
    } else if (key == "esr.kernel_h") {
      c.esr.kernel_h = as_int();
    } else if (key == "esr.kernel_w") {
      c.esr.kernel_w = as_int();
    } else if (key == "esr.cin") {
      c.esr.cin = as_int();
    } else if (key == "esr.cout") {
      c.esr.cout = as_int();
    } else if (key == "esr.stride") {
      c.esr.stride = as_int();
    } else if (key == "esr.in_h") {
      c.esr.in_h = as_int();
    } else if (key == "esr.in_w") {
      c.esr.in_w = as_int();
    } else if (key == "esr.out_h") {
      c.esr.out_h = as_int();
    } else if (key == "esr.out_w") {
      c.esr.out_w = as_int();
    } else if (key == "score.mode") {
      c.score_mode = ParseScoreMode(value);
    } else if (key == "metrics.d") {
      c.d_auto = value == "auto";
      if (!c.d_auto) c.d = as_int();
    } else if (key == "metrics.classes") {
      c.classes = ParseClassSet(value);
    } else if (key == "metrics.num_classes") {
      c.num_classes = as_int();
    } else if (key == "metrics.ignore") {
      if (value == "none") {
        c.ignore.reset();
      } else {
        c.ignore = as_int();
      }
    } else if (key == "analysis.window") {
      c.window = as_int();
    } else if (key == "analysis.stride") {
      c.window_stride = as_int();
    } else if (key == "analysis.bins") {
      c.bins = as_int();
    } else if (key == "output.format") {
      c.format = value;
    } else if (key == "run.seed") {
      c.seed = ParseNumber<std::uint64_t>(key, value);
    } else {
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": unknown key '" + key + "'");
    }
  }
}

void ApplyConfigFile(const std::filesystem::path& path, RunConfig* config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  ApplyConfigText(text.str(), config);
}

}  // namespace alias_scope::cli
