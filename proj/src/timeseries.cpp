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

#include "timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "errors.hpp"

namespace hxid {

std::optional<Channel> channel_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kChannelCount; ++i) {
    if (kChannelNames[i] == name) return static_cast<Channel>(i);
  }
  return std::nullopt;
}

std::vector<InputVector> RegularFrame::inputs() const {
  std::vector<InputVector> u(size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = input_at(i);
  return u;
}

std::optional<SplitSpec> SplitSpec::preset(std::string_view label) {
  if (label == "D1") return d1();
  if (label == "D2") return d2();
  if (label == "D3") return d3();
  return std::nullopt;
}

std::vector<double> resample_linear(const IrregularSeries& series, double t0,
                                    double dt, std::size_t n) {
  if (series.samples.size() < 2) {
    throw Error(ErrorKind::data,
                "resampling requires at least 2 raw samples");
  }
  if (!(dt > 0.0)) {
    throw Error(ErrorKind::argument, "dt must be positive");
  }
  if (n == 0) {
    throw Error(ErrorKind::argument, "resample grid must be non-empty");
  }

  const auto& s = series.samples;
  std::vector<double> out(n);
  std::size_t j = 0;  // invariant: s[j].time <= t < s[j+1].time once inside
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + static_cast<double>(i) * dt;
    if (t <= s.front().time) {
      out[i] = s.front().value;
      continue;
    }
    if (t >= s.back().time) {
      out[i] = s.back().value;
      continue;
    }
    while (j + 2 < s.size() && s[j + 1].time <= t) ++j;
    const double t_a = s[j].time, t_b = s[j + 1].time;
    const double v_a = s[j].value, v_b = s[j + 1].value;
    out[i] = v_a + (t - t_a) * (v_b - v_a) / (t_b - t_a);
  }
  return out;
}

std::vector<double> median_filter(std::span<const double> values,
                                  std::size_t window) {
  if (values.empty()) {
    throw Error(ErrorKind::argument, "median filter input is empty");
  }
  if (window == 0 || window % 2 == 0) {
    throw Error(ErrorKind::argument, "median filter window must be odd");
  }
  if (window > values.size()) {
    throw Error(ErrorKind::argument,
                "median filter window exceeds sequence length");
  }
  if (window == 1) return {values.begin(), values.end()};

  const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(window) / 2;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(values.size());
  std::vector<double> out(values.size());
  std::vector<double> buf(window);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t k = -half; k <= half; ++k) {
      const std::ptrdiff_t idx = std::clamp<std::ptrdiff_t>(i + k, 0, n - 1);
      buf[static_cast<std::size_t>(k + half)] = values[idx];
    }
    std::nth_element(buf.begin(), buf.begin() + half, buf.end());
    out[i] = buf[static_cast<std::size_t>(half)];
  }
  return out;
}

RegularFrame build_frame(std::span<const IrregularSeries> raw, double dt,
                         std::size_t filter_window) {
  if (!(dt > 0.0)) {
    throw Error(ErrorKind::argument, "dt must be positive");
  }
  std::array<const IrregularSeries*, kChannelCount> by_channel{};
  for (const IrregularSeries& s : raw) {
    auto& slot = by_channel[static_cast<int>(s.channel)];
    if (slot != nullptr) {
      throw Error(ErrorKind::data,
                  std::string("duplicate channel: ") +
                      std::string(kChannelNames[static_cast<int>(s.channel)]));
    }
    slot = &s;
  }
  for (std::size_t i = 0; i < kChannelCount; ++i) {
    if (by_channel[i] == nullptr) {
      throw Error(ErrorKind::data, std::string("missing channel: ") +
                                       std::string(kChannelNames[i]));
    }
    if (by_channel[i]->samples.size() < 2) {
      throw Error(ErrorKind::data, std::string("channel ") +
                                       std::string(kChannelNames[i]) +
                                       " has fewer than 2 samples");
    }
  }

  // The grid spans the intersection of per-channel time coverage.
  double t_start = by_channel[0]->samples.front().time;
  double t_end = by_channel[0]->samples.back().time;
  for (std::size_t i = 1; i < kChannelCount; ++i) {
    t_start = std::max(t_start, by_channel[i]->samples.front().time);
    t_end = std::min(t_end, by_channel[i]->samples.back().time);
  }
  if (!(t_end - t_start >= dt)) {
    throw Error(ErrorKind::data, "channel time ranges overlap by less than dt");
  }
  // Tiny relative nudge so an exact multiple of dt is not lost to rounding.
  const double q = (t_end - t_start) / dt;
  const std::size_t n = static_cast<std::size_t>(q * (1.0 + 1e-12)) + 1;

  RegularFrame frame;
  frame.t0 = t_start;
  frame.dt = dt;
  for (std::size_t i = 0; i < kChannelCount; ++i) {
    std::vector<double> v = resample_linear(*by_channel[i], t_start, dt, n);
    frame.columns[i] =
        filter_window == 1 ? std::move(v) : median_filter(v, filter_window);
  }
  return frame;
}

std::pair<RegularFrame, RegularFrame> split_frame(const RegularFrame& frame,
                                                  const SplitSpec& spec) {
  if (!(spec.train_hours > 0.0) || spec.test_hours < 0.0) {
    throw Error(ErrorKind::argument,
                "split requires train_hours > 0 and test_hours >= 0");
  }
  const auto samples_in = [&](double hours) {
    return static_cast<std::size_t>(
        std::llround(hours * 3600.0 / frame.dt));
  };
  const std::size_t n_train = samples_in(spec.train_hours) + 1;
  const std::size_t n_test = samples_in(spec.test_hours);
  if (n_train + n_test > frame.size()) {
    throw Error(ErrorKind::data,
                "frame shorter than requested train+test duration");
  }

  RegularFrame train, test;
  train.t0 = frame.t0;
  train.dt = frame.dt;
  test.t0 = frame.time_at(n_train);
  test.dt = frame.dt;
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    const auto& col = frame.columns[c];
    train.columns[c].assign(col.begin(), col.begin() + n_train);
    test.columns[c].assign(col.begin() + n_train,
                           col.begin() + n_train + n_test);
  }
  return {std::move(train), std::move(test)};
}

std::uint64_t frame_digest(const RegularFrame& frame) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto fold = [&h](const void* p, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  fold(&frame.t0, sizeof frame.t0);
  fold(&frame.dt, sizeof frame.dt);
  for (const auto& col : frame.columns) {
    const std::size_t n = col.size();
    fold(&n, sizeof n);
    if (!col.empty()) fold(col.data(), col.size() * sizeof(double));
  }
  return h;
}

}  // namespace hxid
