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

#include "dua/momentum.hpp"

#include "dua/error.hpp"

namespace dua::bn {

MomentumSchedule MomentumSchedule::make(double rho0, double omega, double zeta) {
  MomentumSchedule s;
  s.rho0 = rho0;
  s.omega = omega;
  s.zeta = zeta;
  s.rho_k = rho0;
  s.k = 0;
  s.validate();
  return s;
}

MomentumSchedule MomentumSchedule::fixed(double rho0) {
  return make(rho0, 1.0, 0.0);
}

void MomentumSchedule::validate() const {
  if (!(rho0 > 0.0 && rho0 <= 1.0)) {
    throw ParameterError("MomentumSchedule: rho0 must be in (0, 1]");
  }
  if (!(omega > 0.0 && omega <= 1.0)) {
    throw ParameterError("MomentumSchedule: omega must be in (0, 1]");
  }
  if (!(zeta >= 0.0 && zeta < rho0)) {
    throw ParameterError("MomentumSchedule: zeta must satisfy 0 <= zeta < rho0");
  }
  if (rho0 + zeta > 1.0) {
    throw ParameterError("MomentumSchedule: rho0 + zeta must not exceed 1");
  }
}

double MomentumSchedule::step() {
  rho_k *= omega;
  ++k;
  return rho_k + zeta;
}

std::pair<double, MomentumSchedule> dua_momentum_step(MomentumSchedule schedule) {
  const double w = schedule.step();
  return {w, schedule};
}

}  // namespace dua::bn
