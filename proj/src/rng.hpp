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
#include <random>
#include <string_view>

namespace hxid {

// Deterministic randomness. Every stochastic task derives its own stream
// seed from (master seed, textual label), so concurrent tasks are both
// independent and schedule-invariant.
//
// Pinned algorithms (results are hashed by downstream tests; do not change
// silently):
//   * stream seed derivation: FNV-1a over the label bytes folded into the
//     master seed, then two rounds of the splitmix64 finalizer;
//   * uniform doubles: std::mt19937_64 output mapped via (x >> 11) * 2^-53;
//   * normal draws: Marsaglia polar method over those uniforms, pairs cached.

/// Deterministic, collision-resistant map from (master seed, label) to a
/// stream seed. Total function; the empty label is valid.
std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                 std::string_view label);

/// One deterministic random stream. Not shareable across tasks; derive a
/// fresh seed per task instead.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Unbiased uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal draw (mean 0, variance 1), Marsaglia polar method.
  double normal();

  /// Fisher-Yates shuffle of indices 0..n-1, consuming below() draws.
  template <typename RandomIt>
  void shuffle(RandomIt first, RandomIt last) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      const auto j = below(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hxid
