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

#include "noise.hpp"

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "rng.hpp"
#include "test_util.hpp"

using namespace hxid;

namespace {

OutputTargets ramp_targets(std::size_t n) {
  OutputTargets t;
  t.t_co.resize(n);
  t.t_ho.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.t_co[i] = 55.0 + 0.001 * static_cast<double>(i);
    t.t_ho[i] = 70.0 - 0.001 * static_cast<double>(i);
  }
  return t;
}

}  // namespace

TEST_CASE("sigma = 0 returns a bit-exact copy") {
  const OutputTargets in = ramp_targets(257);
  const OutputTargets out = inject_noise(in, {0.0, 12345});
  CHECK(out.t_co == in.t_co);
  CHECK(out.t_ho == in.t_ho);
}

TEST_CASE("same seed and inputs give identical outputs") {
  const OutputTargets in = ramp_targets(100);
  const NoiseConfig cfg{0.35, 777};
  const OutputTargets a = inject_noise(in, cfg);
  const OutputTargets b = inject_noise(in, cfg);
  CHECK(a.t_co == b.t_co);
  CHECK(a.t_ho == b.t_ho);
}

TEST_CASE("changing the seed changes the realization but nothing else") {
  const OutputTargets in = ramp_targets(100);
  const OutputTargets a = inject_noise(in, {0.35, 1});
  const OutputTargets b = inject_noise(in, {0.35, 2});
  CHECK(a.t_co.size() == in.t_co.size());
  CHECK(b.t_ho.size() == in.t_ho.size());
  CHECK(a.t_co != b.t_co);
}

TEST_CASE("negative sigma and mismatched channels are argument errors") {
  const OutputTargets in = ramp_targets(8);
  CHECK(throws_kind(ErrorKind::argument,
                    [&] { inject_noise(in, {-0.1, 0}); }));
  OutputTargets bad = in;
  bad.t_ho.pop_back();
  CHECK(throws_kind(ErrorKind::argument,
                    [&] { inject_noise(bad, {0.1, 0}); }));
}

TEST_CASE("noise statistics converge: sigma = 0.35 over 1e5 draws") {
  const std::size_t n = 50000;  // both channels -> 1e5 scalar draws
  const OutputTargets in = ramp_targets(n);
  const OutputTargets out = inject_noise(in, {0.35, 20261});

  std::vector<double> deltas;
  deltas.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    deltas.push_back(out.t_co[i] - in.t_co[i]);
    deltas.push_back(out.t_ho[i] - in.t_ho[i]);
  }
  double sum = 0.0;
  for (const double d : deltas) sum += d;
  const double mean = sum / static_cast<double>(deltas.size());
  double ss = 0.0;
  for (const double d : deltas) ss += (d - mean) * (d - mean);
  const double sd = std::sqrt(ss / static_cast<double>(deltas.size() - 1));

  CHECK(std::abs(mean) < 0.0034);         // 3 sigma / sqrt(N)
  CHECK(std::abs(sd - 0.35) < 0.01);
}

TEST_CASE("stream seed derivation is stable, total and collision-free") {
  CHECK(derive_stream_seed(1, "noise") == derive_stream_seed(1, "noise"));
  CHECK(derive_stream_seed(1, "noise") != derive_stream_seed(2, "noise"));
  CHECK(derive_stream_seed(1, "") == derive_stream_seed(1, ""));

  // Every stream label family the project uses, pairwise distinct.
  std::vector<std::string> labels = {"", "noise", "starts", "he1/params"};
  for (const char* sigma :
       {"0.000000", "0.050000", "0.100000", "0.200000", "0.350000",
        "0.500000", "0.750000", "1.000000", "1.500000", "2.000000",
        "2.500000"}) {
    labels.push_back(std::string("sigma=") + sigma);
  }
  for (const char* ch : {"T_hi", "T_ci", "m_h", "m_c", "T_co", "T_ho"}) {
    labels.push_back(std::string("he2/input/") + ch);
    labels.push_back(std::string("he1/input/") + ch);
    labels.push_back(std::string("he2/degrade/") + ch);
    labels.push_back(std::string("he1/degrade/") + ch);
  }
  for (const std::uint64_t master : {0ULL, 1ULL, 0xdeadbeefULL}) {
    std::set<std::uint64_t> seen;
    for (const auto& label : labels) {
      CHECK(seen.insert(derive_stream_seed(master, label)).second);
    }
  }
}

TEST_CASE("normal stream basics") {
  RandomStream s(42);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) sum += s.normal();
  CHECK(std::abs(sum / 10000.0) < 0.05);

  RandomStream a(9), b(9);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(b.below(7) < 7);
  }
}
