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

#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "integrate.hpp"
#include "rng.hpp"

namespace hxid {

namespace {

void validate_spec(const ScenarioSpec& spec) {
  if (!(spec.duration_hours > 0.0)) {
    throw Error(ErrorKind::argument, "scenario duration must be positive");
  }
  if (!(spec.temp_precision > 0.0) || !(spec.flow_precision > 0.0)) {
    throw Error(ErrorKind::argument, "sensor precision must be positive");
  }
  if (spec.measurement_noise_sigma < 0.0) {
    throw Error(ErrorKind::argument, "measurement noise must be >= 0");
  }
}

struct ProfileParams {
  double lo = 0.0, hi = 0.0;
  double walk_sigma = 0.0;
};

ProfileParams profile_params(const ScenarioSpec& spec, Channel c) {
  switch (c) {
    case Channel::t_hi:
      return {spec.t_hi_min, spec.t_hi_max, spec.temp_walk_sigma};
    case Channel::t_ci:
      return {spec.t_ci_min, spec.t_ci_max, spec.temp_walk_sigma};
    case Channel::m_h:
    case Channel::m_c:
      return {spec.flow_min, spec.flow_max, spec.flow_walk_sigma};
    default:
      throw Error(ErrorKind::internal, "no profile for output channels");
  }
}

/// Piecewise setpoints with first-order approach plus a bounded random walk.
std::vector<double> input_profile(const ScenarioSpec& spec, Channel c,
                                  double dt_seconds, std::size_t n) {
  const ProfileParams pp = profile_params(spec, c);
  RandomStream stream(derive_stream_seed(
      spec.seed, spec.stream_prefix + "/input/" +
                     std::string(kChannelNames[static_cast<int>(c)])));

  const auto setpoint = [&]() {
    return pp.lo + (pp.hi - pp.lo) * stream.uniform();
  };
  const auto dwell = [&]() {
    return 3600.0 * (spec.dwell_min_hours +
                     (spec.dwell_max_hours - spec.dwell_min_hours) *
                         stream.uniform());
  };

  std::vector<double> v(n);
  double level = setpoint();
  double target = level;
  double next_change = dwell();
  const double approach =
      1.0 - std::exp(-dt_seconds / spec.approach_seconds);
  const double walk_step = pp.walk_sigma * std::sqrt(dt_seconds);

  for (std::size_t i = 0; i < n; ++i) {
    v[i] = level;
    const double t = static_cast<double>(i + 1) * dt_seconds;
    if (t >= next_change) {
      target = setpoint();
      next_change += dwell();
    }
    level += (target - level) * approach;
    if (walk_step > 0.0) level += walk_step * stream.normal();
    level = std::clamp(level, pp.lo, pp.hi);
  }
  return v;
}

ParameterVector params_at(const ScenarioSpec& spec, double t_seconds) {
  ParameterVector p = spec.true_params;
  if (spec.k2_modulation != 0.0) {
    const double phase = 2.0 * std::numbers::pi * t_seconds /
                         (spec.k2_period_hours * 3600.0);
    p.k2 *= 1.0 + spec.k2_modulation * std::sin(phase);
  }
  return p;
}

std::size_t grid_size(double duration_hours, double dt_seconds) {
  const double q = duration_hours * 3600.0 / dt_seconds;
  return static_cast<std::size_t>(q * (1.0 + 1e-12)) + 1;
}

RegularFrame frame_with_inputs(const ScenarioSpec& spec, double dt_seconds) {
  const std::size_t n = grid_size(spec.duration_hours, dt_seconds);
  RegularFrame frame;
  frame.t0 = 0.0;
  frame.dt = dt_seconds;
  for (const Channel c :
       {Channel::t_hi, Channel::t_ci, Channel::m_h, Channel::m_c}) {
    frame.col_mut(c) = input_profile(spec, c, dt_seconds, n);
  }
  frame.col_mut(Channel::t_co).resize(n);
  frame.col_mut(Channel::t_ho).resize(n);
  return frame;
}

}  // namespace

ScenarioSpec scenario_by_name(const std::string& name, std::uint64_t seed) {
  ScenarioSpec spec;
  spec.name = name;
  spec.seed = seed;
  if (name == "roundtrip") {
    return spec;
  }
  if (name == "misspecified") {
    spec.k2_modulation = 0.2;
    spec.k2_period_hours = 50.0;
    spec.sensor_lag_units = 3.0;  // 90 s of wall clock
    spec.validation_perturb = 0.05;
    return spec;
  }
  throw Error(ErrorKind::argument, "unknown scenario: " + name);
}

RegularFrame generate_truth(const ScenarioSpec& spec, double fine_dt) {
  validate_spec(spec);
  if (!(fine_dt > 0.0)) {
    throw Error(ErrorKind::argument, "fine grid step must be positive");
  }

  RegularFrame frame = frame_with_inputs(spec, fine_dt);
  const std::size_t n = frame.size();
  const double h = model_units(fine_dt);

  ModelState x = equilibrium_state(frame.input_at(0), params_at(spec, 0.0));
  ModelState y = x;  // sensor-lagged reading
  const bool lagged = spec.sensor_lag_units > 0.0;
  const double lag_alpha =
      lagged ? 1.0 - std::exp(-h / spec.sensor_lag_units) : 1.0;

  auto& t_co = frame.col_mut(Channel::t_co);
  auto& t_ho = frame.col_mut(Channel::t_ho);
  for (std::size_t i = 0; i < n; ++i) {
    t_co[i] = y.t_co;
    t_ho[i] = y.t_ho;
    if (i + 1 == n) break;
    const ParameterVector p =
        params_at(spec, static_cast<double>(i) * fine_dt);
    x = detail::rk4_step_unchecked(x, frame.input_at(i), p, h);
    if (lagged) {
      y.t_co += lag_alpha * (x.t_co - y.t_co);
      y.t_ho += lag_alpha * (x.t_ho - y.t_ho);
    } else {
      y = x;
    }
  }
  return frame;
}

RegularFrame generate_euler_frame(const ScenarioSpec& spec,
                                  double dt_seconds) {
  validate_spec(spec);
  if (spec.k2_modulation != 0.0 || spec.sensor_lag_units != 0.0) {
    throw Error(ErrorKind::argument,
                "euler generation is only defined for the well-specified "
                "scenario");
  }

  RegularFrame frame = frame_with_inputs(spec, dt_seconds);
  const std::size_t n = frame.size();
  const double h = model_units(dt_seconds);

  ModelState x = equilibrium_state(frame.input_at(0), spec.true_params);
  auto& t_co = frame.col_mut(Channel::t_co);
  auto& t_ho = frame.col_mut(Channel::t_ho);
  for (std::size_t i = 0; i < n; ++i) {
    t_co[i] = x.t_co;
    t_ho[i] = x.t_ho;
    if (i + 1 == n) break;
    x = detail::euler_step_unchecked(x, frame.input_at(i), spec.true_params,
                                     h);
  }
  return frame;
}

std::vector<std::size_t> cov_thin(std::span<const double> values,
                                  double threshold) {
  if (!(threshold >= 0.0)) {
    throw Error(ErrorKind::argument, "threshold must be >= 0");
  }
  std::vector<std::size_t> emitted;
  if (values.empty()) return emitted;
  emitted.push_back(0);
  double last = values[0];
  const double effective = threshold * (1.0 - 1e-9);
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (std::abs(values[i] - last) >= effective) {
      emitted.push_back(i);
      last = values[i];
    }
  }
  return emitted;
}

std::vector<IrregularSeries> degrade(const RegularFrame& fine,
                                     const ScenarioSpec& spec) {
  validate_spec(spec);
  if (fine.size() < 2) {
    throw Error(ErrorKind::argument, "fine frame must have >= 2 samples");
  }
  if (!(fine.dt <= 30.0)) {
    throw Error(ErrorKind::argument,
                "degrade expects a frame at dt <= 30 s");
  }

  std::vector<IrregularSeries> out;
  out.reserve(kChannelCount);
  std::vector<double> work(fine.size());
  for (std::size_t ci = 0; ci < kChannelCount; ++ci) {
    const Channel c = static_cast<Channel>(ci);
    const double q = spec.precision_for(c);
    const double sigma = spec.noise_sigma_for(c);
    RandomStream stream(derive_stream_seed(
        spec.seed, spec.stream_prefix + "/degrade/" +
                       std::string(kChannelNames[ci])));

    const auto col = fine.col(c);
    for (std::size_t i = 0; i < col.size(); ++i) {
      const double noisy =
          sigma > 0.0 ? col[i] + sigma * stream.normal() : col[i];
      work[i] = std::round(noisy / q) * q;
    }

    IrregularSeries series;
    series.channel = c;
    const auto keep = cov_thin(work, 2.0 * q);
    series.samples.reserve(keep.size());
    for (const std::size_t i : keep) {
      series.samples.push_back({fine.time_at(i), work[i]});
    }
    out.push_back(std::move(series));
  }
  return out;
}

ScenarioSpec validation_twin(const ScenarioSpec& spec) {
  ScenarioSpec twin = spec;
  twin.stream_prefix = "he1";
  if (spec.validation_perturb != 0.0) {
    RandomStream stream(derive_stream_seed(spec.seed, "he1/params"));
    auto k = twin.true_params.to_array();
    for (double& v : k) {
      const double sign = stream.uniform() < 0.5 ? -1.0 : 1.0;
      v *= 1.0 + sign * spec.validation_perturb;
    }
    twin.true_params = ParameterVector::from_array(k);
  }
  return twin;
}

MisspecifiedData make_misspecified(const ScenarioSpec& spec) {
  validate_spec(spec);

  const RegularFrame fine2 = generate_truth(spec);
  const auto series2 = degrade(fine2, spec);

  const ScenarioSpec twin = validation_twin(spec);
  const RegularFrame fine1 = generate_truth(twin);
  const auto series1 = degrade(fine1, twin);

  return {build_frame(series2, 30.0, 5), build_frame(series1, 30.0, 5)};
}

}  // namespace hxid
