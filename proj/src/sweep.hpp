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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "estimate.hpp"
#include "metrics.hpp"
#include "timeseries.hpp"

namespace hxid {

// Noise-scale study: estimate parameters at each noise scale, evaluate the
// fitted model on clean (never noise-injected) frames, tabulate metrics
// versus scale and select the optimum.

/// Default scale grid: the studied 0.05..2.5 range plus the sigma = 0
/// vanilla anchor.
std::vector<double> default_scale_grid();

struct ChannelMetrics {
  MetricSet t_co;
  MetricSet t_ho;
};

struct SweepRow {
  double sigma = 0.0;
  bool failed = false;
  std::string error;  ///< failure reason when failed
  EstimationResult result;
  /// Per-dataset metrics, keyed "train"/"test"/"validation". Ordered map so
  /// serialization is deterministic.
  std::map<std::string, ChannelMetrics> metrics;
};

struct SweepReport {
  std::vector<double> scales;
  std::vector<SweepRow> rows;  ///< one per requested scale, order preserved
  double selected_sigma = 0.0;
  std::string selection_rule;
  std::uint64_t master_seed = 0;
  std::string config_digest;  ///< hex digest of the run configuration
};

/// Evaluation datasets. Train is mandatory; the others are optional.
struct EvalFrames {
  RegularFrame train;
  std::optional<RegularFrame> test;
  std::optional<RegularFrame> validation;
};

/// Clean-data evaluation of fitted parameters on one frame: free-running
/// Euler simulation from the frame's first measured outputs, metrics per
/// output channel.
ChannelMetrics evaluate_on_frame(const ParameterVector& params,
                                 const RegularFrame& frame, double dt);

/// Runs the study. `problem` is the template; per row its noise scale is
/// replaced and its run seed derived from (master_seed, scale label), so row
/// contents are independent of grid order and of `jobs`. Estimation failures
/// are recorded in their row and the sweep continues; only an all-rows
/// failure throws. Evaluation inputs are digest-checked before and after to
/// prove they were never perturbed.
SweepReport run_sweep(const EstimationProblem& problem,
                      std::uint64_t master_seed, std::span<const double> scales,
                      const EvalFrames& eval_frames, int jobs = 1);

/// Selection rule: the scale minimizing clean test-set RMSE averaged over
/// both output channels (train-set RMSE when no test frame exists), ties
/// broken toward the smaller scale. Throws when no row succeeded.
double select_optimum(std::span<const SweepRow> rows, bool have_test);

}  // namespace hxid
