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

#include <optional>
#include <span>

namespace hxid {

// Regression-style evaluation metrics over measured vs predicted sequences,
// with errors e = measured - predicted.

struct MetricSet {
  double max_ae = 0.0;  ///< max |e|, degC
  double mae = 0.0;     ///< mean |e|, degC
  double mse = 0.0;     ///< mean e^2, degC^2
  double rmse = 0.0;    ///< sqrt(mse), degC
  /// mean(|e| / |measured|) as a dimensionless fraction (0.01 = 1%);
  /// undefined when any |measured| < 1e-6.
  std::optional<double> mape;
  /// Coefficient of determination 1 - SS_res/SS_tot against the measured
  /// mean; undefined when the measured sequence has (numerically) zero
  /// variance.
  std::optional<double> r2;
};

/// Computes all metrics in one pass. Throws ErrorKind::argument for empty or
/// length-mismatched sequences.
MetricSet compute_metrics(std::span<const double> measured,
                          std::span<const double> predicted);

enum class Orientation { lower_better, higher_better };

/// Percentage improvement of `treated` over `vanilla`:
/// lower_better  -> 100 * (vanilla - treated) / vanilla
/// higher_better -> 100 * (treated - vanilla) / vanilla
/// Undefined (nullopt) when vanilla == 0.
std::optional<double> improvement_percent(double vanilla, double treated,
                                          Orientation orientation);

}  // namespace hxid
