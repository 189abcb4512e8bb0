/*
 * Copyright (c) 2026, hxid contributors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>

namespace hxid {

// Lumped-parameter model of a water-to-water plate heat exchanger.
//
// State x = [T_co, T_ho]: outlet temperatures on the cold (demand) and hot
// (supply) sides, in degC. Inputs u = [T_hi, T_ci, m_h, m_c]: inlet
// temperatures (degC) and per-exchanger mass flows (kg/s). The dynamics are
//
//   dT_co/dt = k1*m_h*(T_hi - T_co) - k2*((T_co+T_hi)/2 - (T_ho+T_ci)/2) + k3
//   dT_ho/dt = -k1*m_c*(T_ho - T_ci) + k2*((T_co+T_hi)/2 - (T_ho+T_ci)/2) + k4
//
// k1 and k2 bundle the physical constants (specific heat over thermal
// capacitance, heat-transfer coefficient over thermal capacitance); k3 and k4
// absorb sensor offsets and unmodeled dynamics.
//
// Time-base convention: rates k1..k4 are expressed per *model time unit*.
// Identification data sampled every 30 s uses one model time unit per sample
// (see kSecondsPerModelUnit), the base in which the bundled reference optimum
// is stable under forward-Euler stepping at unit step.

/// Wall-clock seconds covered by one model time unit.
inline constexpr double kSecondsPerModelUnit = 30.0;

/// Converts a wall-clock interval (seconds) to model time units.
inline constexpr double model_units(double wall_seconds) {
  return wall_seconds / kSecondsPerModelUnit;
}

struct ModelState {
  double t_co = 0.0;  ///< cold-side (demand) outlet temperature, degC
  double t_ho = 0.0;  ///< hot-side (supply) outlet temperature, degC
};

/// Time derivative of ModelState, degC per model time unit.
struct StateRate {
  double d_t_co = 0.0;
  double d_t_ho = 0.0;
};

struct InputVector {
  double t_hi = 0.0;  ///< hot-side inlet temperature, degC
  double t_ci = 0.0;  ///< cold-side inlet temperature, degC
  double m_h = 0.0;   ///< hot-side mass flow, kg/s (per exchanger)
  double m_c = 0.0;   ///< cold-side mass flow, kg/s (per exchanger)
};

struct ParameterVector {
  double k1 = 0.0;  ///< 1/kg per model time unit; physical when >= 0
  double k2 = 0.0;  ///< 1/model time unit; physical when >= 0
  double k3 = 0.0;  ///< degC per model time unit, offset term (cold side)
  double k4 = 0.0;  ///< degC per model time unit, offset term (hot side)

  std::array<double, 4> to_array() const { return {k1, k2, k3, k4}; }
  static ParameterVector from_array(const std::array<double, 4>& a) {
    return {a[0], a[1], a[2], a[3]};
  }
};

/// Plant telemetry reports total flow over two identical exchangers piped in
/// parallel; each exchanger sees half.
inline double per_exchanger_flow(double total_flow) { return 0.5 * total_flow; }

/// Plausibility validator for measured temperatures. Deliberately not
/// enforced by constructors so stress tests can exceed it.
inline bool plausible_temperature(double degc) {
  return degc >= -20.0 && degc <= 150.0;
}

inline bool plausible_state(const ModelState& s) {
  return plausible_temperature(s.t_co) && plausible_temperature(s.t_ho);
}

/// Right-hand side of the model ODE. Throws ErrorKind::domain on non-finite
/// input and ErrorKind::argument on negative flows.
StateRate ode_rhs(const ModelState& state, const InputVector& input,
                  const ParameterVector& params);

/// Analytic fixed point of the dynamics for constant input: the unique state
/// with zero derivatives. Throws ErrorKind::singular when the underlying 2x2
/// linear system has no unique solution (e.g. k1 = k2 = 0).
ModelState equilibrium_state(const InputVector& input,
                             const ParameterVector& params);

namespace detail {

/// Unchecked RHS kernel for integrator hot loops; callers validate once.
inline StateRate rhs_unchecked(const ModelState& s, const InputVector& u,
                               const ParameterVector& p) {
  const double mix = 0.5 * (s.t_co + u.t_hi) - 0.5 * (s.t_ho + u.t_ci);
  return {p.k1 * u.m_h * (u.t_hi - s.t_co) - p.k2 * mix + p.k3,
          -p.k1 * u.m_c * (s.t_ho - u.t_ci) + p.k2 * mix + p.k4};
}

void require_finite_state(const ModelState& s);
void require_valid_input(const InputVector& u);
void require_finite_params(const ParameterVector& p);

}  // namespace detail

}  // namespace hxid
