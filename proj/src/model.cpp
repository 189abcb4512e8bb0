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

#include "model.hpp"

#include <cmath>

#include "errors.hpp"

namespace hxid {

namespace detail {

void require_finite_state(const ModelState& s) {
  if (!std::isfinite(s.t_co) || !std::isfinite(s.t_ho)) {
    throw Error(ErrorKind::domain, "model state is not finite");
  }
}

void require_valid_input(const InputVector& u) {
  if (!std::isfinite(u.t_hi) || !std::isfinite(u.t_ci) ||
      !std::isfinite(u.m_h) || !std::isfinite(u.m_c)) {
    throw Error(ErrorKind::domain, "input vector is not finite");
  }
  if (u.m_h < 0.0 || u.m_c < 0.0) {
    throw Error(ErrorKind::argument, "mass flows must be non-negative");
  }
}

void require_finite_params(const ParameterVector& p) {
  if (!std::isfinite(p.k1) || !std::isfinite(p.k2) || !std::isfinite(p.k3) ||
      !std::isfinite(p.k4)) {
    throw Error(ErrorKind::domain, "parameter vector is not finite");
  }
}

}  // namespace detail

StateRate ode_rhs(const ModelState& state, const InputVector& input,
                  const ParameterVector& params) {
  detail::require_finite_state(state);
  detail::require_valid_input(input);
  detail::require_finite_params(params);
  return detail::rhs_unchecked(state, input, params);
}

ModelState equilibrium_state(const InputVector& input,
                             const ParameterVector& params) {
  detail::require_valid_input(input);
  detail::require_finite_params(params);

  // Setting both derivatives to zero gives a linear system in (T_co, T_ho):
  //   a11*T_co + a12*T_ho = b1
  //   a21*T_co + a22*T_ho = b2
  const double half_k2 = 0.5 * params.k2;
  const double a11 = params.k1 * input.m_h + half_k2;
  const double a12 = -half_k2;
  const double a21 = -half_k2;
  const double a22 = params.k1 * input.m_c + half_k2;
  const double b1 = params.k1 * input.m_h * input.t_hi -
                    half_k2 * (input.t_hi - input.t_ci) + params.k3;
  const double b2 = params.k1 * input.m_c * input.t_ci +
                    half_k2 * (input.t_hi - input.t_ci) + params.k4;

  const double det = a11 * a22 - a12 * a21;
  const double scale = (std::abs(a11) + std::abs(a12)) *
                       (std::abs(a21) + std::abs(a22));
  if (!(std::abs(det) > 1e-14 * scale) || det == 0.0) {
    throw Error(ErrorKind::singular,
                "no unique equilibrium: coupling matrix is singular");
  }

  return {(b1 * a22 - b2 * a12) / det, (a11 * b2 - a21 * b1) / det};
}

}  // namespace hxid
