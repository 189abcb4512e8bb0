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

#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace hxid {

namespace {
constexpr double kMapeDenominatorFloor = 1e-6;
}

MetricSet compute_metrics(std::span<const double> measured,
                          std::span<const double> predicted) {
  if (measured.empty()) {
    throw Error(ErrorKind::argument, "metrics require non-empty sequences");
  }
  if (measured.size() != predicted.size()) {
    throw Error(ErrorKind::argument,
                "measured and predicted lengths differ");
  }

  const std::size_t n = measured.size();
  const double n_d = static_cast<double>(n);

  double sum_measured = 0.0;
  double max_abs_measured = 0.0;
  for (const double m : measured) {
    sum_measured += m;
    max_abs_measured = std::max(max_abs_measured, std::abs(m));
  }
  const double mean_measured = sum_measured / n_d;

  double max_ae = 0.0, sum_ae = 0.0, sum_se = 0.0, sum_ape = 0.0;
  double ss_tot = 0.0;
  bool mape_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = measured[i] - predicted[i];
    const double ae = std::abs(e);
    max_ae = std::max(max_ae, ae);
    sum_ae += ae;
    sum_se += e * e;
    if (std::abs(measured[i]) < kMapeDenominatorFloor) {
      mape_ok = false;
    } else if (mape_ok) {
      sum_ape += ae / std::abs(measured[i]);
    }
    const double d = measured[i] - mean_measured;
    ss_tot += d * d;
  }

  MetricSet out;
  out.max_ae = max_ae;
  out.mae = sum_ae / n_d;
  out.mse = sum_se / n_d;
  out.rmse = std::sqrt(out.mse);
  if (mape_ok) out.mape = sum_ape / n_d;

  // A literally-constant measured sequence can still leave SS_tot at a few
  // rounding ulps, so undefined-variance detection needs a floor above that.
  const double scale = std::max(1.0, max_abs_measured);
  const double per_element =
      64.0 * std::numeric_limits<double>::epsilon() * scale;
  const double ss_tot_floor = n_d * per_element * per_element;
  if (ss_tot > ss_tot_floor) out.r2 = 1.0 - sum_se / ss_tot;

  return out;
}

std::optional<double> improvement_percent(double vanilla, double treated,
                                          Orientation orientation) {
  if (vanilla == 0.0) return std::nullopt;
  const double delta = orientation == Orientation::lower_better
                           ? vanilla - treated
                           : treated - vanilla;
  return 100.0 * delta / vanilla;
}

}  // namespace hxid
