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

#include <span>
#include <string>
#include <vector>

#include "timeseries.hpp"

namespace hxid {

// File formats:
//  * long CSV, header `time,channel,value`: one change-of-value sample per
//    row; `time` is integer/decimal epoch seconds or ISO-8601 UTC
//    (YYYY-MM-DDTHH:MM:SS[.sss]Z); `channel` is one of the six names.
//  * wide CSV, header `time,T_hi,T_ci,m_h,m_c,T_co,T_ho`: one uniformly
//    sampled frame row per line.
// All writers are atomic (write to a temp file, then rename).

/// Parses a long CSV into per-channel series (channels present in the file,
/// canonical order). Per channel, timestamps must be strictly increasing;
/// duplicates are a data error.
std::vector<IrregularSeries> read_long_csv(const std::string& path);

void write_long_csv(const std::string& path,
                    std::span<const IrregularSeries> series);

/// Parses a wide CSV; requires >= 2 rows with a uniform time column (the
/// grid step is inferred from the first two rows).
RegularFrame read_wide_csv(const std::string& path);

void write_wide_csv(const std::string& path, const RegularFrame& frame);

/// Atomic text write; creates parent directories as needed.
void write_text_atomic(const std::string& path, std::string_view content);

std::string read_text(const std::string& path);

/// Canonical number formatting used by the CSV writers: integers without a
/// decimal point, everything else with 17 significant digits.
std::string format_number(double v);

/// Epoch seconds from either a numeric literal or ISO-8601 UTC.
double parse_time(const std::string& text);

}  // namespace hxid
