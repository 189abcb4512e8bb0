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

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "model.hpp"

namespace hxid {

// Preprocessing of change-of-value telemetry into uniform frames: linear
// resampling, moving median filtering, and chronological train/test splits.

/// The six telemetry channels, in canonical column order.
enum class Channel : int { t_hi = 0, t_ci, m_h, m_c, t_co, t_ho };

inline constexpr std::size_t kChannelCount = 6;
inline constexpr std::array<std::string_view, kChannelCount> kChannelNames = {
    "T_hi", "T_ci", "m_h", "m_c", "T_co", "T_ho"};

/// Parses a channel name; returns nullopt for unknown names.
std::optional<Channel> channel_from_name(std::string_view name);

struct Sample {
  double time = 0.0;  ///< seconds since epoch
  double value = 0.0;
};

/// Raw change-of-value telemetry for one channel; timestamps strictly
/// increasing.
struct IrregularSeries {
  Channel channel = Channel::t_hi;
  std::vector<Sample> samples;
};

/// Uniformly sampled multi-channel frame.
struct RegularFrame {
  double t0 = 0.0;
  double dt = 30.0;  ///< grid spacing, seconds
  std::array<std::vector<double>, kChannelCount> columns;

  std::size_t size() const { return columns[0].size(); }
  double time_at(std::size_t i) const {
    return t0 + static_cast<double>(i) * dt;
  }
  double duration() const {
    return size() < 2 ? 0.0 : static_cast<double>(size() - 1) * dt;
  }

  std::span<const double> col(Channel c) const {
    return columns[static_cast<int>(c)];
  }
  std::vector<double>& col_mut(Channel c) {
    return columns[static_cast<int>(c)];
  }

  InputVector input_at(std::size_t i) const {
    return {col(Channel::t_hi)[i], col(Channel::t_ci)[i],
            col(Channel::m_h)[i], col(Channel::m_c)[i]};
  }
  ModelState output_at(std::size_t i) const {
    return {col(Channel::t_co)[i], col(Channel::t_ho)[i]};
  }

  std::vector<InputVector> inputs() const;
};

/// Chronological train/test split expressed in hours of data.
struct SplitSpec {
  double train_hours = 0.0;
  double test_hours = 0.0;
  std::string label = "custom";

  static SplitSpec d1() { return {11.0, 128.0, "D1"}; }
  static SplitSpec d2() { return {25.0, 114.0, "D2"}; }
  static SplitSpec d3() { return {53.0, 86.0, "D3"}; }

  /// Resolves "D1"/"D2"/"D3"; returns nullopt for anything else.
  static std::optional<SplitSpec> preset(std::string_view label);
};

/// Samples the series onto the uniform grid t0 + i*dt, i in [0, n), by
/// linear interpolation between bracketing raw samples. Outside the raw time
/// range the nearest endpoint value is held constant. Throws
/// ErrorKind::data when the series has fewer than 2 samples and
/// ErrorKind::argument for a non-positive dt or n == 0.
std::vector<double> resample_linear(const IrregularSeries& series, double t0,
                                    double dt, std::size_t n);

/// Length-preserving moving median over the edge-replicated input (first and
/// last values repeated (window-1)/2 times). Window must be odd, >= 1 and
/// <= values.size(); throws ErrorKind::argument otherwise.
std::vector<double> median_filter(std::span<const double> values,
                                  std::size_t window);

/// Two-step preprocessing: each channel is resampled onto a common grid
/// spanning the intersection of channel time ranges, then median-filtered.
/// All six channels must be present exactly once. Throws ErrorKind::data for
/// missing/duplicate channels or an overlap shorter than dt.
RegularFrame build_frame(std::span<const IrregularSeries> raw, double dt = 30.0,
                         std::size_t filter_window = 5);

/// Splits a frame into a leading train window and the immediately following
/// test window. The boundary sample belongs to train; the windows never
/// overlap. A zero-length test window is allowed. Throws ErrorKind::data when
/// the frame is too short.
std::pair<RegularFrame, RegularFrame> split_frame(const RegularFrame& frame,
                                                  const SplitSpec& spec);

/// Order-insensitive digest of frame contents (layout, timestamps and all
/// column bytes). Used to assert that evaluation data stays untouched.
std::uint64_t frame_digest(const RegularFrame& frame);

}  // namespace hxid
