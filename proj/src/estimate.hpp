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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "model.hpp"
#include "noise.hpp"
#include "timeseries.hpp"

namespace hxid {

// Least-squares parameter estimation: minimize the sum of squared errors
// between (optionally noise-injected) measured outputs and the free-running
// forward-Euler simulation, over the four model parameters. The optimizer is
// a bounded Nelder-Mead direct search with space-filling multi-start.

struct ParameterBounds {
  std::array<double, 4> lower{0.0, 0.0, -50.0, -50.0};
  std::array<double, 4> upper{1.0, 10.0, 50.0, 50.0};

  bool contains(const ParameterVector& p) const {
    const auto a = p.to_array();
    for (int i = 0; i < 4; ++i) {
      if (a[i] < lower[i] || a[i] > upper[i]) return false;
    }
    return true;
  }
};

struct EstimationProblem {
  RegularFrame frame;  ///< training window
  ParameterVector initial{0.1, 0.1, 0.1, 0.1};
  ParameterBounds bounds;
  NoiseConfig noise;      ///< sigma and the run seed (see run_seed_for)
  double dt = 1.0;        ///< integration step per sample, model time units
  int budget = 2000;      ///< max objective evaluations per start
  int n_starts = 8;       ///< multi-start count, including `initial`
  double j_rel_tol = 1e-10;
  double param_tol = 1e-8;
  int jobs = 1;           ///< starts may run concurrently; never changes results
};

struct StartRecord {
  int index = 0;
  ParameterVector start;
  /// Final objective; empty when the start was discarded for a non-finite
  /// objective at its starting point.
  std::optional<double> final_j;
  long long evaluations = 0;
  bool converged = false;
  bool discarded = false;
};

struct EstimationResult {
  ParameterVector params;   ///< best point across starts
  double objective = 0.0;   ///< J at params, degC^2
  bool converged = false;   ///< convergence flag of the winning start
  long long evaluations = 0;  ///< total objective evaluations
  std::vector<StartRecord> per_start;
  ParameterVector initial;
  double sigma = 0.0;
  std::uint64_t seed = 0;   ///< run seed the estimation used
};

/// Iteration log sink: one call per accepted improvement of a start's best
/// objective, with the evaluation count local to that start.
using IterationSink =
    std::function<void(int start_index, long long evaluations, double j)>;

/// Eq-style sum-of-squared-errors objective. Simulates open loop from
/// x0 = (targets.t_co[0], targets.t_ho[0]) with forward Euler at `dt` over
/// the frame's inputs and accumulates squared residuals over all time steps
/// and both output channels. Returns +infinity when the simulation leaves
/// the finite range (the caller treats that as "worst possible").
/// Throws ErrorKind::argument when targets are not aligned with the frame.
double objective_j(const ParameterVector& params, const RegularFrame& frame,
                   const OutputTargets& targets, double dt);

/// The stream seed an estimation run uses, derived from the master seed and
/// the fixed-decimal label of the noise scale. A sweep row and a standalone
/// run with the same (master seed, sigma) therefore see identical noise and
/// identical start points.
std::uint64_t run_seed_for(std::uint64_t master_seed, double sigma);

/// Fixed-decimal textual label of a noise scale ("0.350000").
std::string sigma_label(double sigma);

/// Solves the estimation problem. `problem.noise.seed` is the run seed;
/// targets are replaced by one fixed noise realization up front when
/// sigma > 0, so the objective stays deterministic during optimization.
/// Returns converged=false (not an exception) when every start exhausts its
/// budget; throws ErrorKind::domain when every start is discarded.
EstimationResult estimate(const EstimationProblem& problem,
                          const IterationSink& sink = nullptr);

}  // namespace hxid
