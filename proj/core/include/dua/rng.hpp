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

#ifndef DUA_RNG_HPP_
#define DUA_RNG_HPP_

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace dua {

/// xoshiro256++ (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
///
/// All derived draws (uniform, normal, Poisson) are implemented here rather
/// than through <random> distributions so that streams replay bit-for-bit
/// across standard library implementations.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed = 0);

  /// Independent stream for a named component: seed ^ fnv1a(component).
  static Xoshiro256pp derive(std::uint64_t seed, std::string_view component);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform01();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via the Marsaglia polar method.
  double normal();
  /// Poisson variate; inversion by sequential search for small means,
  /// normal approximation with continuity correction above 500.
  std::uint64_t poisson(double mean);

  /// Advances the state by 2^128 calls.
  void jump();

  friend bool operator==(const Xoshiro256pp&, const Xoshiro256pp&) = default;

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// SplitMix64 finalizer; used for seeding and for mixing indices into seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for item `index` of a stream, stable under reordering of items.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace dua

#endif  // DUA_RNG_HPP_
