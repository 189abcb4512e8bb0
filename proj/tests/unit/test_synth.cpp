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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "estimate.hpp"
#include "model.hpp"
#include "test_util.hpp"

using namespace hxid;

namespace {

ScenarioSpec constant_profile_spec(std::uint64_t seed) {
  ScenarioSpec spec = scenario_by_name("roundtrip", seed);
  spec.t_hi_min = spec.t_hi_max = 80.0;
  spec.t_ci_min = spec.t_ci_max = 45.0;
  spec.flow_min = spec.flow_max = 2.0;
  spec.temp_walk_sigma = 0.0;
  spec.flow_walk_sigma = 0.0;
  return spec;
}

}  // namespace

TEST_CASE("scenario presets and validation") {
  const ScenarioSpec rt = scenario_by_name("roundtrip", 1);
  CHECK(rt.k2_modulation == 0.0);
  CHECK(rt.sensor_lag_units == 0.0);
  const ScenarioSpec mis = scenario_by_name("misspecified", 1);
  CHECK(mis.k2_modulation == 0.2);
  CHECK(mis.sensor_lag_units == 3.0);
  CHECK(mis.validation_perturb == 0.05);
  CHECK(throws_kind(ErrorKind::argument,
                    [] { scenario_by_name("nope", 1); }));

  ScenarioSpec bad = rt;
  bad.duration_hours = 0.0;
  CHECK(throws_kind(ErrorKind::argument, [&] { generate_truth(bad); }));
  bad = rt;
  bad.temp_precision = 0.0;
  CHECK(throws_kind(ErrorKind::argument, [&] { generate_truth(bad); }));
}

TEST_CASE("truth generation is deterministic") {
  ScenarioSpec spec = scenario_by_name("misspecified", 33);
  spec.duration_hours = 1.0;
  const RegularFrame a = generate_truth(spec);
  const RegularFrame b = generate_truth(spec);
  CHECK(frame_digest(a) == frame_digest(b));
  CHECK(a.dt == 1.0);
  CHECK(a.size() == 3601);

  ScenarioSpec other = spec;
  other.seed = 34;
  CHECK(frame_digest(generate_truth(other)) != frame_digest(a));
}

TEST_CASE("constant inputs hold the system at equilibrium") {
  ScenarioSpec spec = constant_profile_spec(3);
  spec.duration_hours = 24.0;
  const RegularFrame frame = generate_truth(spec);
  const ModelState eq =
      equilibrium_state(frame.input_at(0), spec.true_params);
  const std::size_t last = frame.size() - 1;
  CHECK(std::abs(frame.col(Channel::t_co)[last] - eq.t_co) < 1e-4);
  CHECK(std::abs(frame.col(Channel::t_ho)[last] - eq.t_ho) < 1e-4);

  // Same limit with a sensor lag in the loop.
  ScenarioSpec lagged = spec;
  lagged.sensor_lag_units = 3.0;
  const RegularFrame lf = generate_truth(lagged);
  CHECK(std::abs(lf.col(Channel::t_co)[last] - eq.t_co) < 1e-4);
}

TEST_CASE("cov_thin implements the change-of-value threshold") {
  SUBCASE("worked example: 20.04 suppressed, 20.11 emitted") {
    const std::vector<double> v{20.00, 20.04, 20.11};
    const auto kept = cov_thin(v, 0.1);
    CHECK(kept == std::vector<std::size_t>{0, 2});
  }
  SUBCASE("constant sequence emits exactly one sample") {
    const std::vector<double> v(100, 7.5);
    CHECK(cov_thin(v, 0.1).size() == 1);
  }
  SUBCASE("zero threshold emits every sample") {
    const std::vector<double> v{1.0, 1.0001, 1.0002, 1.0003};
    CHECK(cov_thin(v, 0.0).size() == 4);
  }
  SUBCASE("steps exactly at the threshold fire despite quantization") {
    // Quantized to 0.05: consecutive values 20.05, 20.15 differ by two
    // quanta, which is 0.1 up to floating-point representation.
    const std::vector<double> v{std::round(20.05 / 0.05) * 0.05,
                                std::round(20.15 / 0.05) * 0.05};
    CHECK(cov_thin(v, 0.1).size() == 2);
  }
}

TEST_CASE("degrade emits one sample per channel for a constant plant") {
  ScenarioSpec spec = constant_profile_spec(4);
  spec.duration_hours = 0.5;
  spec.measurement_noise_sigma = 0.0;
  const RegularFrame fine = generate_truth(spec);
  const auto series = degrade(fine, spec);
  REQUIRE(series.size() == kChannelCount);
  for (const auto& s : series) {
    CHECK(s.samples.size() == 1);
    CHECK(s.samples[0].time == fine.t0);
  }
}

TEST_CASE("degrade quantizes to the per-channel precision") {
  ScenarioSpec spec = scenario_by_name("roundtrip", 5);
  spec.duration_hours = 0.25;
  const RegularFrame fine = generate_truth(spec);
  const auto series = degrade(fine, spec);
  for (const auto& s : series) {
    const double q = spec.precision_for(s.channel);
    for (const Sample& sample : s.samples) {
      const double ratio = sample.value / q;
      CHECK(std::abs(ratio - std::round(ratio)) < 1e-6);
    }
    // Telemetry timestamps strictly increase.
    for (std::size_t i = 1; i < s.samples.size(); ++i) {
      CHECK(s.samples[i].time > s.samples[i - 1].time);
    }
  }
}

TEST_CASE("misspecified data differs between the twin exchangers") {
  ScenarioSpec spec = scenario_by_name("misspecified", 6);
  spec.duration_hours = 2.0;
  const MisspecifiedData data = make_misspecified(spec);
  CHECK(data.he2.size() > 0);
  CHECK(data.he1.size() > 0);
  CHECK(frame_digest(data.he2) != frame_digest(data.he1));

  const ScenarioSpec twin = validation_twin(spec);
  CHECK(twin.stream_prefix == "he1");
  const auto k2 = spec.true_params.to_array();
  const auto k1 = twin.true_params.to_array();
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(k1[i] - k2[i]) ==
          doctest::Approx(0.05 * std::abs(k2[i])).epsilon(1e-9));
  }
}

TEST_CASE("zero lag and zero modulation reduce to the well-specified model") {
  ScenarioSpec spec = scenario_by_name("misspecified", 7);
  spec.duration_hours = 1.0;
  spec.k2_modulation = 0.0;
  spec.sensor_lag_units = 0.0;
  ScenarioSpec plain = scenario_by_name("roundtrip", 7);
  plain.duration_hours = 1.0;
  CHECK(frame_digest(generate_truth(spec)) ==
        frame_digest(generate_truth(plain)));

  ScenarioSpec no_perturb = spec;
  no_perturb.validation_perturb = 0.0;
  const ScenarioSpec twin = validation_twin(no_perturb);
  CHECK(twin.true_params.to_array() == spec.true_params.to_array());
}

TEST_CASE("well-specified euler data is exactly fittable") {
  ScenarioSpec spec = scenario_by_name("roundtrip", 8);
  spec.duration_hours = 3.0;
  EstimationProblem problem;
  problem.frame = generate_euler_frame(spec);
  problem.noise.sigma = 0.0;
  const EstimationResult r = estimate(problem);
  CHECK(r.objective <= 1e-6);
}

TEST_CASE("misspecified data leaves an irreducible residual floor") {
  ScenarioSpec spec = scenario_by_name("misspecified", 9);
  spec.duration_hours = 8.0;
  const MisspecifiedData data = make_misspecified(spec);
  EstimationProblem problem;
  problem.frame = data.he2;
  problem.budget = 4000;
  const EstimationResult r = estimate(problem);
  const double rmse = std::sqrt(
      r.objective / static_cast<double>(2 * problem.frame.size()));
  CHECK(rmse > 0.05);
}

TEST_CASE("euler generation rejects misspecified scenarios") {
  const ScenarioSpec spec = scenario_by_name("misspecified", 10);
  CHECK(throws_kind(ErrorKind::argument,
                    [&] { generate_euler_frame(spec); }));
}
