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

#include "csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <tuple>

#include "errors.hpp"

namespace hxid {

namespace {

namespace fs = std::filesystem;

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

double parse_double(const std::string& text, const char* what,
                    std::size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw Error(ErrorKind::data, std::string("line ") +
                                     std::to_string(line_no) + ": bad " +
                                     what + " '" + text + "'");
  }
  return v;
}

// Days between 1970-01-01 and y-m-d in the proleptic Gregorian calendar
// (Howard Hinnant's civil-days algorithm).
long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

bool looks_like_iso(const std::string& s) {
  return s.size() >= 10 && s[4] == '-' && s[7] == '-';
}

double parse_iso8601_utc(const std::string& s) {
  int year, month, day, hour = 0, minute = 0;
  double second = 0.0;
  char sep = 0;
  int consumed = 0;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2d%n", &year, &month, &day,
                  &consumed) != 3 ||
      consumed != 10) {
    throw Error(ErrorKind::data, "bad ISO-8601 date: " + s);
  }
  std::size_t pos = 10;
  if (pos < s.size()) {
    sep = s[pos];
    if (sep != 'T' && sep != ' ') {
      throw Error(ErrorKind::data, "bad ISO-8601 separator: " + s);
    }
    ++pos;
    int n = 0;
    if (std::sscanf(s.c_str() + pos, "%2d:%2d%n", &hour, &minute, &n) != 2) {
      throw Error(ErrorKind::data, "bad ISO-8601 time: " + s);
    }
    pos += static_cast<std::size_t>(n);
    if (pos < s.size() && s[pos] == ':') {
      ++pos;
      char* end = nullptr;
      second = std::strtod(s.c_str() + pos, &end);
      pos = static_cast<std::size_t>(end - s.c_str());
    }
    if (pos < s.size()) {
      if (s[pos] != 'Z' || pos + 1 != s.size()) {
        throw Error(ErrorKind::data,
                    "ISO-8601 timestamps must be UTC ('Z'): " + s);
      }
    }
  }
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 ||
      minute > 59 || second >= 61.0) {
    throw Error(ErrorKind::data, "ISO-8601 field out of range: " + s);
  }
  const long long days =
      days_from_civil(year, static_cast<unsigned>(month),
                      static_cast<unsigned>(day));
  return static_cast<double>(days) * 86400.0 + hour * 3600.0 + minute * 60.0 +
         second;
}

}  // namespace

double parse_time(const std::string& text) {
  if (looks_like_iso(text)) return parse_iso8601_utc(text);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw Error(ErrorKind::data, "bad time value: " + text);
  }
  return v;
}

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.007199254740992e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io, "cannot open for reading: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_atomic(const std::string& path, std::string_view content) {
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorKind::io, "cannot open for writing: " + tmp.string());
    }
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) {
      throw Error(ErrorKind::io, "write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    throw Error(ErrorKind::io,
                "rename failed: " + tmp.string() + " -> " + path);
  }
}

std::vector<IrregularSeries> read_long_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io, "cannot open for reading: " + path);
  }

  std::string line;
  if (!std::getline(in, line) || trim_cr(line) != "time,channel,value") {
    throw Error(ErrorKind::data,
                path + ": expected header 'time,channel,value'");
  }

  std::array<IrregularSeries, kChannelCount> by_channel;
  std::array<bool, kChannelCount> seen{};
  for (std::size_t i = 0; i < kChannelCount; ++i) {
    by_channel[i].channel = static_cast<Channel>(i);
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view sv = trim_cr(line);
    if (sv.empty()) continue;
    const auto fields = split_fields(sv);
    if (fields.size() != 3) {
      throw Error(ErrorKind::data, path + ": line " +
                                       std::to_string(line_no) +
                                       ": expected 3 fields");
    }
    const auto channel = channel_from_name(fields[1]);
    if (!channel) {
      throw Error(ErrorKind::data, path + ": line " +
                                       std::to_string(line_no) +
                                       ": unknown channel '" + fields[1] +
                                       "'");
    }
    const double t = parse_time(fields[0]);
    const double v = parse_double(fields[2], "value", line_no);
    auto& series = by_channel[static_cast<int>(*channel)];
    if (!series.samples.empty()) {
      const double prev = series.samples.back().time;
      if (t == prev) {
        throw Error(ErrorKind::data,
                    path + ": line " + std::to_string(line_no) +
                        ": duplicate timestamp in channel " + fields[1]);
      }
      if (t < prev) {
        throw Error(ErrorKind::data,
                    path + ": line " + std::to_string(line_no) +
                        ": timestamps not increasing in channel " +
                        fields[1]);
      }
    }
    series.samples.push_back({t, v});
    seen[static_cast<int>(*channel)] = true;
  }

  std::vector<IrregularSeries> out;
  for (std::size_t i = 0; i < kChannelCount; ++i) {
    if (seen[i]) out.push_back(std::move(by_channel[i]));
  }
  return out;
}

void write_long_csv(const std::string& path,
                    std::span<const IrregularSeries> series) {
  // Rows merged across channels, ordered by time then channel index, the
  // way a telemetry exporter would dump them.
  std::vector<std::tuple<double, int, double>> rows;
  std::size_t total = 0;
  for (const auto& s : series) total += s.samples.size();
  rows.reserve(total);
  for (const auto& s : series) {
    for (const Sample& sample : s.samples) {
      rows.emplace_back(sample.time, static_cast<int>(s.channel),
                        sample.value);
    }
  }
  std::sort(rows.begin(), rows.end());

  std::string out = "time,channel,value\n";
  for (const auto& [t, c, v] : rows) {
    out += format_number(t);
    out += ',';
    out += kChannelNames[static_cast<std::size_t>(c)];
    out += ',';
    out += format_number(v);
    out += '\n';
  }
  write_text_atomic(path, out);
}

RegularFrame read_wide_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io, "cannot open for reading: " + path);
  }

  std::string line;
  if (!std::getline(in, line) ||
      trim_cr(line) != "time,T_hi,T_ci,m_h,m_c,T_co,T_ho") {
    throw Error(ErrorKind::data,
                path + ": expected header 'time,T_hi,T_ci,m_h,m_c,T_co,T_ho'");
  }

  std::vector<double> times;
  RegularFrame frame;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view sv = trim_cr(line);
    if (sv.empty()) continue;
    const auto fields = split_fields(sv);
    if (fields.size() != 1 + kChannelCount) {
      throw Error(ErrorKind::data, path + ": line " +
                                       std::to_string(line_no) +
                                       ": expected 7 fields");
    }
    times.push_back(parse_time(fields[0]));
    for (std::size_t c = 0; c < kChannelCount; ++c) {
      frame.columns[c].push_back(
          parse_double(fields[c + 1], "value", line_no));
    }
  }

  if (times.size() < 2) {
    throw Error(ErrorKind::data, path + ": need at least 2 rows");
  }
  frame.t0 = times[0];
  frame.dt = times[1] - times[0];
  if (!(frame.dt > 0.0)) {
    throw Error(ErrorKind::data, path + ": time column must increase");
  }
  const double tol = 1e-6 * std::max(frame.dt, 1.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - frame.time_at(i)) > tol) {
      throw Error(ErrorKind::data,
                  path + ": time column is not uniformly spaced");
    }
  }
  return frame;
}

void write_wide_csv(const std::string& path, const RegularFrame& frame) {
  std::string out = "time,T_hi,T_ci,m_h,m_c,T_co,T_ho\n";
  for (std::size_t i = 0; i < frame.size(); ++i) {
    out += format_number(frame.time_at(i));
    for (std::size_t c = 0; c < kChannelCount; ++c) {
      out += ',';
      out += format_number(frame.columns[c][i]);
    }
    out += '\n';
  }
  write_text_atomic(path, out);
}

}  // namespace hxid
