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

#include "integrate.hpp"

#include <cmath>

#include "errors.hpp"

namespace hxid {

namespace {

void require_positive_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorKind::argument, "dt must be positive and finite");
  }
}

}  // namespace

ModelState euler_step(const ModelState& state, const InputVector& input,
                      const ParameterVector& params, double dt) {
  require_positive_dt(dt);
  detail::require_finite_state(state);
  detail::require_valid_input(input);
  detail::require_finite_params(params);
  return detail::euler_step_unchecked(state, input, params, dt);
}

ModelState rk4_step(const ModelState& state, const InputVector& input,
                    const ParameterVector& params, double dt) {
  require_positive_dt(dt);
  detail::require_finite_state(state);
  detail::require_valid_input(input);
  detail::require_finite_params(params);
  return detail::rk4_step_unchecked(state, input, params, dt);
}

Trajectory simulate(const ModelState& x0, std::span<const InputVector> inputs,
                    const ParameterVector& params, double dt, Method method,
                    bool closing_state, double t0) {
  require_positive_dt(dt);
  if (inputs.empty()) {
    throw Error(ErrorKind::argument, "simulate requires at least one input");
  }
  detail::require_finite_state(x0);
  detail::require_finite_params(params);
  for (const InputVector& u : inputs) detail::require_valid_input(u);

  Trajectory traj;
  traj.t0 = t0;
  traj.dt = dt;
  traj.states.reserve(inputs.size() + (closing_state ? 1 : 0));
  traj.states.push_back(x0);

  const std::size_t steps =
      closing_state ? inputs.size() : inputs.size() - 1;
  ModelState x = x0;
  for (std::size_t i = 0; i < steps; ++i) {
    x = (method == Method::euler)
            ? detail::euler_step_unchecked(x, inputs[i], params, dt)
            : detail::rk4_step_unchecked(x, inputs[i], params, dt);
    traj.states.push_back(x);
  }
  return traj;
}

}  // namespace hxid
