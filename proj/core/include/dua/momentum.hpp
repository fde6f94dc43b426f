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

#ifndef DUA_MOMENTUM_HPP_
#define DUA_MOMENTUM_HPP_

#include <cstdint>
#include <utility>

namespace dua::bn {

/// Geometrically decaying momentum with a floor.
///
/// Each step multiplies rho by omega and returns the effective EMA weight
/// rho_k + zeta. The decay is applied before first use, so the first step
/// already returns rho0 * omega + zeta.
struct MomentumSchedule {
  double rho0 = 0.1;
  double omega = 0.94;
  double zeta = 0.005;
  double rho_k = 0.1;
  std::uint64_t k = 0;

  static MomentumSchedule make(double rho0, double omega, double zeta);
  /// Constant weight rho0 (omega = 1, zeta = 0).
  static MomentumSchedule fixed(double rho0);

  /// Requires 0 < rho0 <= 1, 0 < omega <= 1, 0 <= zeta < rho0 and
  /// rho0 + zeta <= 1.
  void validate() const;

  /// Advances one step and returns w_k.
  double step();
  /// rho_k + zeta for the current k without advancing.
  [[nodiscard]] double current_weight() const { return rho_k + zeta; }

  friend bool operator==(const MomentumSchedule&,
                         const MomentumSchedule&) = default;
};

/// Functional form of MomentumSchedule::step.
std::pair<double, MomentumSchedule> dua_momentum_step(MomentumSchedule schedule);

}  // namespace dua::bn

#endif  // DUA_MOMENTUM_HPP_
