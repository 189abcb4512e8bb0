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

#include <cstddef>
#include <span>
#include <vector>

#include "model.hpp"

namespace hxid {

// Fixed-step time integration of the model ODE. Forward Euler is the
// training integrator; the classical 4th-order Runge-Kutta step serves as
// the accuracy reference and drives synthetic-data generation.

enum class Method { euler, rk4 };

struct Trajectory {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<ModelState> states;

  std::size_t size() const { return states.size(); }

  /// Timestamp of sample i, computed by multiplication so repeated stepping
  /// never accumulates floating-point drift.
  double time_at(std::size_t i) const {
    return t0 + static_cast<double>(i) * dt;
  }

  std::vector<double> times() const {
    std::vector<double> t(states.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = time_at(i);
    return t;
  }
};

/// x' = x + dt * f(x, u, k). Throws ErrorKind::argument for dt <= 0.
ModelState euler_step(const ModelState& state, const InputVector& input,
                      const ParameterVector& params, double dt);

/// Classical 4-stage Runge-Kutta update with the input held constant across
/// the step. Throws ErrorKind::argument for dt <= 0.
ModelState rk4_step(const ModelState& state, const InputVector& input,
                    const ParameterVector& params, double dt);

/// Free-running simulation. Inputs are held piecewise-constant over each
/// step (zero-order hold). states[0] = x0 and states[i+1] advances from
/// states[i] using inputs[i], so states[i] is aligned with inputs[i]'s
/// timestamp and the returned length equals inputs.size(). When
/// closing_state is set the final input drives one extra step and the
/// trajectory has inputs.size() + 1 states.
///
/// Throws ErrorKind::argument for empty inputs or dt <= 0.
Trajectory simulate(const ModelState& x0, std::span<const InputVector> inputs,
                    const ParameterVector& params, double dt,
                    Method method = Method::euler, bool closing_state = false,
                    double t0 = 0.0);

namespace detail {

inline ModelState euler_step_unchecked(const ModelState& s,
                                       const InputVector& u,
                                       const ParameterVector& p, double dt) {
  const StateRate r = rhs_unchecked(s, u, p);
  return {s.t_co + dt * r.d_t_co, s.t_ho + dt * r.d_t_ho};
}

inline ModelState rk4_step_unchecked(const ModelState& s,
                                     const InputVector& u,
                                     const ParameterVector& p, double dt) {
  const StateRate r1 = rhs_unchecked(s, u, p);
  const ModelState s2{s.t_co + 0.5 * dt * r1.d_t_co,
                      s.t_ho + 0.5 * dt * r1.d_t_ho};
  const StateRate r2 = rhs_unchecked(s2, u, p);
  const ModelState s3{s.t_co + 0.5 * dt * r2.d_t_co,
                      s.t_ho + 0.5 * dt * r2.d_t_ho};
  const StateRate r3 = rhs_unchecked(s3, u, p);
  const ModelState s4{s.t_co + dt * r3.d_t_co, s.t_ho + dt * r3.d_t_ho};
  const StateRate r4 = rhs_unchecked(s4, u, p);
  const double sixth = dt / 6.0;
  return {s.t_co + sixth * (r1.d_t_co + 2.0 * r2.d_t_co + 2.0 * r3.d_t_co +
                            r4.d_t_co),
          s.t_ho + sixth * (r1.d_t_ho + 2.0 * r2.d_t_ho + 2.0 * r3.d_t_ho +
                            r4.d_t_ho)};
}

}  // namespace detail

}  // namespace hxid
