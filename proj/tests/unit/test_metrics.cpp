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

#include <cmath>
#include <vector>

#include "../improvement_fixtures.hpp"
#include "doctest.h"
#include "rng.hpp"
#include "test_util.hpp"

using namespace hxid;

TEST_CASE("perfect fit gives (0, 0, 0, 0, 0, 1)") {
  const std::vector<double> v{53.1, 54.2, 52.9, 55.0};
  const MetricSet m = compute_metrics(v, v);
  CHECK(m.max_ae == 0.0);
  CHECK(m.mae == 0.0);
  CHECK(m.mse == 0.0);
  CHECK(m.rmse == 0.0);
  REQUIRE(m.mape.has_value());
  CHECK(*m.mape == 0.0);
  REQUIRE(m.r2.has_value());
  CHECK(*m.r2 == 1.0);
}

TEST_CASE("hand-computed values on [3,4] vs [0,0]") {
  const std::vector<double> measured{3.0, 4.0};
  const std::vector<double> predicted{0.0, 0.0};
  const MetricSet m = compute_metrics(measured, predicted);
  CHECK(m.mse == doctest::Approx(12.5).epsilon(1e-14));
  CHECK(m.rmse == doctest::Approx(std::sqrt(12.5)).epsilon(1e-14));
  CHECK(m.mae == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(m.max_ae == 4.0);
  REQUIRE(m.mape.has_value());
  CHECK(*m.mape == doctest::Approx(1.0).epsilon(1e-14));
  REQUIRE(m.r2.has_value());
  CHECK(*m.r2 == doctest::Approx(-49.0).epsilon(1e-12));
}

TEST_CASE("mean predictor scores r2 = 0") {
  const std::vector<double> measured{1.0, 2.0, 3.0};
  const std::vector<double> predicted{2.0, 2.0, 2.0};
  const MetricSet m = compute_metrics(measured, predicted);
  REQUIRE(m.r2.has_value());
  CHECK(*m.r2 == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("undefined cases are reported, not NaN-propagated") {
  // Near-zero measured values make MAPE undefined.
  const MetricSet a = compute_metrics(std::vector<double>{0.0, 0.0},
                                      std::vector<double>{1.0, -1.0});
  CHECK_FALSE(a.mape.has_value());
  CHECK(a.mse == 1.0);

  // Constant measured sequence has no variance: r2 undefined.
  const MetricSet b = compute_metrics(std::vector<double>{5.0, 5.0, 5.0},
                                      std::vector<double>{4.0, 5.0, 6.0});
  CHECK_FALSE(b.r2.has_value());

  // A constant that is not exactly representable must not sneak through.
  const MetricSet c =
      compute_metrics(std::vector<double>(100, 0.1),
                      std::vector<double>(100, 0.2));
  CHECK_FALSE(c.r2.has_value());
}

TEST_CASE("argument validation") {
  CHECK(throws_kind(ErrorKind::argument, [] {
    compute_metrics(std::vector<double>{}, std::vector<double>{});
  }));
  CHECK(throws_kind(ErrorKind::argument, [] {
    compute_metrics(std::vector<double>{1.0},
                    std::vector<double>{1.0, 2.0});
  }));
}

TEST_CASE("improvement_percent matches the recorded reference arithmetic") {
  const auto imp = [](double vanilla, double treated, bool higher) {
    return *improvement_percent(vanilla, treated,
                                higher ? Orientation::higher_better
                                       : Orientation::lower_better);
  };
  CHECK(imp(0.6796, 0.2721, false) == doctest::Approx(59.96).epsilon(2e-4));
  CHECK(imp(0.4844, 0.9174, true) == doctest::Approx(89.39).epsilon(2e-4));
  CHECK(imp(1.5073, 1.8144, false) ==
        doctest::Approx(-20.37).epsilon(3e-4));
  CHECK(imp(7.0, 7.0, false) == 0.0);
  CHECK(imp(7.0, 7.0, true) == 0.0);
  CHECK_FALSE(
      improvement_percent(0.0, 1.0, Orientation::lower_better).has_value());
}

TEST_CASE("every transcribed summary-table triple is self-consistent") {
  for (std::size_t i = 0; i < hxid_fixtures::kImprovementFixtureCount; ++i) {
    const auto& f = hxid_fixtures::kImprovementFixtures[i];
    CAPTURE(f.id);
    const auto got = improvement_percent(
        f.baseline, f.treated,
        f.higher_better ? Orientation::higher_better
                        : Orientation::lower_better);
    REQUIRE(got.has_value());
    CHECK(std::abs(*got - f.expected_percent) <= 0.01);
  }
}

TEST_CASE("scale and shift behavior") {
  RandomStream gen(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> measured(64), predicted(64);
    for (std::size_t i = 0; i < measured.size(); ++i) {
      measured[i] = 20.0 + 30.0 * gen.uniform();
      predicted[i] = measured[i] + (-2.0 + 4.0 * gen.uniform());
    }
    const MetricSet base = compute_metrics(measured, predicted);

    const double c = 0.5 + 3.0 * gen.uniform();
    std::vector<double> ms(measured), ps(predicted);
    for (auto& v : ms) v *= c;
    for (auto& v : ps) v *= c;
    const MetricSet scaled = compute_metrics(ms, ps);
    CHECK(scaled.max_ae == doctest::Approx(c * base.max_ae).epsilon(1e-9));
    CHECK(scaled.mae == doctest::Approx(c * base.mae).epsilon(1e-9));
    CHECK(scaled.rmse == doctest::Approx(c * base.rmse).epsilon(1e-9));
    CHECK(scaled.mse == doctest::Approx(c * c * base.mse).epsilon(1e-9));
    CHECK(*scaled.mape == doctest::Approx(*base.mape).epsilon(1e-9));
    CHECK(*scaled.r2 == doctest::Approx(*base.r2).epsilon(1e-9));

    const double shift = 5.0 + 10.0 * gen.uniform();
    std::vector<double> mh(measured), ph(predicted);
    for (auto& v : mh) v += shift;
    for (auto& v : ph) v += shift;
    const MetricSet shifted = compute_metrics(mh, ph);
    CHECK(shifted.max_ae == doctest::Approx(base.max_ae).epsilon(1e-9));
    CHECK(shifted.mae == doctest::Approx(base.mae).epsilon(1e-9));
    CHECK(shifted.mse == doctest::Approx(base.mse).epsilon(1e-9));
    CHECK(shifted.rmse == doctest::Approx(base.rmse).epsilon(1e-9));
    CHECK(*shifted.r2 == doctest::Approx(*base.r2).epsilon(1e-8));
    CHECK(*shifted.mape != *base.mape);
  }
}

TEST_CASE("metric identities hold on random sequence pairs") {
  RandomStream gen(123);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + gen.below(40);
    std::vector<double> measured(n), predicted(n);
    for (std::size_t i = 0; i < n; ++i) {
      measured[i] = 30.0 + 40.0 * gen.uniform();
      predicted[i] = 30.0 + 40.0 * gen.uniform();
    }
    const MetricSet m = compute_metrics(measured, predicted);
    CHECK(m.rmse == doctest::Approx(std::sqrt(m.mse)).epsilon(1e-12));
    CHECK(m.mae <= m.rmse + 1e-15);
    CHECK(m.rmse <= m.max_ae + 1e-15);
    CHECK(m.max_ae >= m.mae - 1e-15);
    if (m.r2) CHECK(*m.r2 <= 1.0);
  }
}
