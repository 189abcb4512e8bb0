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
#include <string>
#include <vector>

#include "model.hpp"
#include "timeseries.hpp"

namespace hxid {

// Synthetic datasets: ground-truth simulation with realistic input profiles,
// sensor effects (noise, quantization, change-of-value thinning), and a
// deliberately misspecified scenario in which the fitted model structure
// cannot match the generating dynamics.

struct ScenarioSpec {
  std::string name = "custom";
  std::uint64_t seed = 0;
  /// Stream-label prefix so twin pieces of equipment get independent
  /// realizations from one master seed.
  std::string stream_prefix = "he2";

  ParameterVector true_params{0.0284, 0.2218, 2.14, -1.1161};
  double duration_hours = 140.0;

  // Input profile: piecewise setpoints approached first-order, plus a
  // bounded random walk.
  double t_hi_min = 74.0, t_hi_max = 86.0;
  double t_ci_min = 40.0, t_ci_max = 50.0;
  double flow_min = 1.0, flow_max = 4.0;
  double dwell_min_hours = 2.0, dwell_max_hours = 6.0;
  double approach_seconds = 600.0;  ///< setpoint approach time constant
  double temp_walk_sigma = 0.01;    ///< degC per sqrt(second)
  double flow_walk_sigma = 0.002;   ///< kg/s per sqrt(second)

  // Sensor model (change-of-value telemetry).
  double temp_precision = 0.1;   ///< degC quantum
  double flow_precision = 0.01;  ///< kg/s quantum
  /// Temperature-channel noise, degC; flow channels scale it by
  /// flow_precision / temp_precision.
  double measurement_noise_sigma = 0.05;

  // Misspecification (zero means well-specified).
  double k2_modulation = 0.0;      ///< fractional sinusoidal modulation of k2
  double k2_period_hours = 50.0;   ///< chosen so a 25 h training window sees
                                   ///< a biased half-cycle
  double sensor_lag_units = 0.0;   ///< first-order output lag, model units
  double validation_perturb = 0.0; ///< +-fraction applied to twin parameters

  double precision_for(Channel c) const {
    return (c == Channel::m_h || c == Channel::m_c) ? flow_precision
                                                    : temp_precision;
  }
  double noise_sigma_for(Channel c) const {
    return (c == Channel::m_h || c == Channel::m_c)
               ? measurement_noise_sigma * (flow_precision / temp_precision)
               : measurement_noise_sigma;
  }
};

/// Named scenario presets:
///  * "roundtrip"    - well-specified; outputs generated with forward Euler
///                     at the 30 s cadence, so the model can fit it exactly;
///  * "misspecified" - richer generating model (sinusoidally modulated k2,
///                     first-order sensor lag) plus a parameter-perturbed
///                     validation twin.
/// Throws ErrorKind::argument for unknown names.
ScenarioSpec scenario_by_name(const std::string& name, std::uint64_t seed);

/// Ground-truth frame on a fine grid (default 1 s wall clock). Inputs follow
/// the procedural profile; outputs are the 4th-order Runge-Kutta solution of
/// the (possibly misspecified) generating dynamics, passed through the
/// sensor lag when configured.
RegularFrame generate_truth(const ScenarioSpec& spec, double fine_dt = 1.0);

/// Well-specified frame sampled directly at `dt_seconds` with outputs
/// produced by forward Euler at one model unit per sample. Training on this
/// data can in principle reach a zero objective.
RegularFrame generate_euler_frame(const ScenarioSpec& spec,
                                  double dt_seconds = 30.0);

/// Change-of-value thinning: emits value[i] whenever it moves at least
/// `threshold` away from the last emitted value (first sample always
/// emitted). The comparison tolerates one part in 1e9 so quantized steps
/// that land exactly on the threshold still fire.
std::vector<std::size_t> cov_thin(std::span<const double> values,
                                  double threshold);

/// Sensor acquisition model: per channel, add measurement noise, quantize to
/// the sensor precision, then emit on change-of-value with a threshold of
/// twice the precision. Deterministic given the spec seed.
std::vector<IrregularSeries> degrade(const RegularFrame& fine,
                                     const ScenarioSpec& spec);

struct MisspecifiedData {
  RegularFrame he2;  ///< train/test frame
  RegularFrame he1;  ///< validation frame from the perturbed twin
};

/// Full misspecified dataset: truth -> sensor degradation -> preprocessing
/// at 30 s for both the primary equipment and its imperfect twin.
MisspecifiedData make_misspecified(const ScenarioSpec& spec);

/// The spec used for the validation twin (perturbed parameters, independent
/// streams). Exposed for tests.
ScenarioSpec validation_twin(const ScenarioSpec& spec);

}  // namespace hxid
