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

#ifndef DUA_CORRUPTION_HPP_
#define DUA_CORRUPTION_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "dua/dataset.hpp"
#include "dua/tensor.hpp"

namespace dua::shift {

enum class CorruptionKind {
  gaussian_noise,
  shot_noise,
  impulse_noise,
  defocus_blur,
  contrast,
  brightness,
};

inline constexpr std::array<CorruptionKind, 6> kAllCorruptions = {
    CorruptionKind::gaussian_noise, CorruptionKind::shot_noise,
    CorruptionKind::impulse_noise,  CorruptionKind::defocus_blur,
    CorruptionKind::contrast,       CorruptionKind::brightness,
};

std::string_view to_string(CorruptionKind kind);
/// Throws ParameterError for unknown names.
CorruptionKind parse_corruption(std::string_view name);

struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::gaussian_noise;
  int severity = 0;  ///< 0 is the identity

  void validate() const;
  friend bool operator==(const CorruptionSpec&, const CorruptionSpec&) = default;
};

/// Parameter of `kind` at severity 1..5:
///   gaussian_noise  sigma            .04 .07 .10 .14 .19
///   shot_noise      photons per unit  60  25  12   5   3
///   impulse_noise   flip probability .01 .03 .06 .10 .17
///   defocus_blur    disk radius (px)   1   2   3   4   6
///   contrast        scale            .75 .50 .40 .30 .15
///   brightness      offset           .05 .10 .15 .22 .30
double severity_parameter(CorruptionKind kind, int severity);

/// Table above as JSON, for run manifests.
nlohmann::json severity_manifest();

/// Corrupts every sample of `x`. Sample i draws from a stream seeded by
/// mix_seed(seed, i), so results do not depend on batch composition.
/// Severity 0 returns `x` unchanged; outputs are clamped to [0, 1].
Tensor corrupt(const Tensor& x, const CorruptionSpec& spec, std::uint64_t seed);
/// Same transforms with an explicit parameter in place of a table entry
/// (sigma, photons per unit, probability, radius, scale or offset).
Tensor corrupt_with_parameter(const Tensor& x, CorruptionKind kind, double parameter,
                              std::uint64_t seed);
Dataset corrupt(const Dataset& data, const CorruptionSpec& spec,
                std::uint64_t seed);

}  // namespace dua::shift

#endif  // DUA_CORRUPTION_HPP_
