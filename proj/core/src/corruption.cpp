// Copyright 2026 The DUA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dua/corruption.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dua/error.hpp"
#include "dua/rng.hpp"

namespace dua::shift {
namespace {

constexpr double kTable[6][5] = {
    {0.04, 0.07, 0.10, 0.14, 0.19},  // gaussian_noise: sigma
    {60, 25, 12, 5, 3},              // shot_noise: photons per unit intensity
    {0.01, 0.03, 0.06, 0.10, 0.17},  // impulse_noise: flip probability
    {1, 2, 3, 4, 6},                 // defocus_blur: disk radius in pixels
    {0.75, 0.5, 0.4, 0.3, 0.15},     // contrast: scale about the image mean
    {0.05, 0.10, 0.15, 0.22, 0.30},  // brightness: additive offset
};

constexpr const char* kParamName[6] = {"sigma",  "photons_per_unit", "probability",
                                       "radius", "scale",            "offset"};

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

// Reflect without repeating the edge: -1 -> 1, n -> n - 2.
std::size_t reflect(std::ptrdiff_t i, std::size_t n) {
  const auto m = static_cast<std::ptrdiff_t>(n);
  if (m == 1) return 0;
  while (i < 0 || i >= m) {
    if (i < 0) i = -i;
    if (i >= m) i = 2 * (m - 1) - i;
  }
  return static_cast<std::size_t>(i);
}

void defocus(std::span<const double> in, std::span<double> out, std::size_t c,
             std::size_t h, std::size_t w, double radius) {
  const auto r = static_cast<std::ptrdiff_t>(std::floor(radius));
  std::vector<std::pair<std::ptrdiff_t, std::ptrdiff_t>> taps;
  for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
    for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
      if (static_cast<double>(dy * dy + dx * dx) <= radius * radius) taps.emplace_back(dy, dx);
    }
  }
  const double norm = 1.0 / static_cast<double>(taps.size());
  for (std::size_t ch = 0; ch < c; ++ch) {
    const std::size_t base = ch * h * w;
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        double acc = 0.0;
        for (auto [dy, dx] : taps) {
          const std::size_t yy = reflect(static_cast<std::ptrdiff_t>(y) + dy, h);
          const std::size_t xx = reflect(static_cast<std::ptrdiff_t>(x) + dx, w);
          acc += in[base + yy * w + xx];
        }
        out[base + y * w + x] = clamp01(acc * norm);
      }
    }
  }
}

void corrupt_sample(std::span<const double> in, std::span<double> out, const Shape& s,
                    CorruptionKind kind, double p, Xoshiro256pp& rng) {
  switch (kind) {
    case CorruptionKind::gaussian_noise:
      for (std::size_t i = 0; i < in.size(); ++i) out[i] = clamp01(in[i] + p * rng.normal());
      break;
    case CorruptionKind::shot_noise:
      for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = clamp01(static_cast<double>(rng.poisson(in[i] * p)) / p);
      }
      break;
    case CorruptionKind::impulse_noise:
      for (std::size_t i = 0; i < in.size(); ++i) {
        const double u = rng.uniform01();
        if (u < p / 2) {
          out[i] = 0.0;
        } else if (u < p) {
          out[i] = 1.0;
        } else {
          out[i] = in[i];
        }
      }
      break;
    case CorruptionKind::defocus_blur:
      defocus(in, out, s.c, s.h, s.w, p);
      break;
    case CorruptionKind::contrast: {
      const std::size_t plane = s.plane();
      for (std::size_t ch = 0; ch < s.c; ++ch) {
        double mean = 0.0;
        for (std::size_t i = 0; i < plane; ++i) mean += in[ch * plane + i];
        mean /= static_cast<double>(plane);
        for (std::size_t i = 0; i < plane; ++i) {
          out[ch * plane + i] = clamp01((in[ch * plane + i] - mean) * p + mean);
        }
      }
      break;
    }
    case CorruptionKind::brightness:
      for (std::size_t i = 0; i < in.size(); ++i) out[i] = clamp01(in[i] + p);
      break;
  }
}

}  // namespace

std::string_view to_string(CorruptionKind kind) {
  switch (kind) {
    case CorruptionKind::gaussian_noise: return "gaussian_noise";
    case CorruptionKind::shot_noise: return "shot_noise";
    case CorruptionKind::impulse_noise: return "impulse_noise";
    case CorruptionKind::defocus_blur: return "defocus_blur";
    case CorruptionKind::contrast: return "contrast";
    case CorruptionKind::brightness: return "brightness";
  }
  return "unknown";
}

CorruptionKind parse_corruption(std::string_view name) {
  for (CorruptionKind k : kAllCorruptions) {
    if (to_string(k) == name) return k;
  }
  throw ParameterError("unknown corruption kind '" + std::string(name) + "'");
}

void CorruptionSpec::validate() const {
  if (severity < 0 || severity > 5) {
    throw ParameterError("corruption severity " + std::to_string(severity) +
                         " outside 0..5");
  }
}

double severity_parameter(CorruptionKind kind, int severity) {
  if (severity < 1 || severity > 5) {
    throw ParameterError("severity_parameter: severity must be in 1..5");
  }
  return kTable[static_cast<int>(kind)][severity - 1];
}

nlohmann::json severity_manifest() {
  nlohmann::json j = nlohmann::json::object();
  for (CorruptionKind k : kAllCorruptions) {
    nlohmann::json levels = nlohmann::json::array();
    for (int s = 1; s <= 5; ++s) levels.push_back(severity_parameter(k, s));
    j[std::string(to_string(k))] = {{"parameter", kParamName[static_cast<int>(k)]},
                                    {"levels", levels}};
  }
  return j;
}

Tensor corrupt_with_parameter(const Tensor& x, CorruptionKind kind, double parameter,
                              std::uint64_t seed) {
  if (!std::isfinite(parameter)) {
    throw ParameterError("corruption parameter must be finite");
  }
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.shape().n; ++i) {
    Xoshiro256pp rng(mix_seed(seed, i));
    corrupt_sample(x.sample(i), out.sample(i), x.shape(), kind, parameter, rng);
  }
  return out;
}

Tensor corrupt(const Tensor& x, const CorruptionSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (spec.severity == 0) return x;
  return corrupt_with_parameter(x, spec.kind, severity_parameter(spec.kind, spec.severity),
                                seed);
}

Dataset corrupt(const Dataset& data, const CorruptionSpec& spec, std::uint64_t seed) {
  Dataset out;
  out.images = corrupt(data.images, spec, seed);
  out.labels = data.labels;
  out.name = spec.severity == 0
                 ? data.name
                 : data.name + "-" + std::string(to_string(spec.kind)) + "-" +
                       std::to_string(spec.severity);
  return out;
}

}  // namespace dua::shift
