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

#include <map>
#include <string>

#include "estimate.hpp"
#include "metrics.hpp"
#include "sweep.hpp"

namespace hxid {

// Deterministic serialization of results. JSON payloads carry no timestamps
// and print floating-point values with 17 significant digits, so identical
// runs produce byte-identical files.

/// Minimal streaming JSON writer with a fixed, deterministic layout.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view name);
  JsonWriter& value(double v);
  JsonWriter& value(long long v);
  JsonWriter& value(unsigned long long v);
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& null();

  const std::string& str() const { return out_; }

 private:
  void separate();
  std::string out_;
  std::string stack_;  // '[' or '{' per open container
  bool pending_key_ = false;
  bool container_empty_ = true;
};

std::string estimation_result_json(const EstimationResult& result);

std::string sweep_report_json(const SweepReport& report);

/// Payload of the evaluate command: per-dataset, per-output-channel metric
/// sets.
std::string evaluation_json(
    const std::map<std::string, ChannelMetrics>& by_dataset);

/// Writes one SVG line chart per metric (rmse, mape, max_ae, r2) versus
/// noise scale into `dir`, one series per evaluation dataset (channel-mean
/// values). Files: rmse.svg, mape.svg, max_ae.svg, r2.svg.
void write_sweep_plots(const SweepReport& report, const std::string& dir);

}  // namespace hxid
