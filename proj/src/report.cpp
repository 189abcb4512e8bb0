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

#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <vector>

#include "csv.hpp"
#include "errors.hpp"

namespace hxid {

namespace {

std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

// JSON has no representation for non-finite numbers; a diverged simulation
// can push metric values to infinity, and those serialize as null.
std::string json_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void JsonWriter::separate() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!stack_.empty() && !container_empty_) out_ += ',';
  container_empty_ = false;
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  out_ += '{';
  stack_ += '{';
  container_empty_ = true;
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  stack_.pop_back();
  container_empty_ = false;
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  out_ += '[';
  stack_ += '[';
  container_empty_ = true;
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  stack_.pop_back();
  container_empty_ = false;
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view name) {
  if (!container_empty_) out_ += ',';
  container_empty_ = false;
  out_ += '"';
  out_ += json_escape(name);
  out_ += "\":";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separate();
  out_ += json_double(v);
  return *this;
}

JsonWriter& JsonWriter::value(long long v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(unsigned long long v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separate();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
  separate();
  out_ += '"';
  out_ += json_escape(v);
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::null() {
  separate();
  out_ += "null";
  return *this;
}

namespace {

void write_params(JsonWriter& w, const ParameterVector& p) {
  w.begin_array();
  for (const double v : p.to_array()) w.value(v);
  w.end_array();
}

void write_optional(JsonWriter& w, const std::optional<double>& v) {
  if (v) {
    w.value(*v);
  } else {
    w.null();
  }
}

void write_metric_set(JsonWriter& w, const MetricSet& m) {
  w.begin_object();
  w.key("max_ae").value(m.max_ae);
  w.key("mae").value(m.mae);
  w.key("mape");
  write_optional(w, m.mape);
  w.key("mse").value(m.mse);
  w.key("rmse").value(m.rmse);
  w.key("r2");
  write_optional(w, m.r2);
  w.end_object();
}

void write_channel_metrics(JsonWriter& w, const ChannelMetrics& m) {
  w.begin_object();
  w.key("T_co");
  write_metric_set(w, m.t_co);
  w.key("T_ho");
  write_metric_set(w, m.t_ho);
  w.end_object();
}

void write_result(JsonWriter& w, const EstimationResult& r) {
  w.begin_object();
  w.key("initial");
  write_params(w, r.initial);
  w.key("params");
  write_params(w, r.params);
  w.key("objective").value(r.objective);
  w.key("converged").value(r.converged);
  w.key("evaluations").value(static_cast<long long>(r.evaluations));
  w.key("sigma").value(r.sigma);
  w.key("seed").value(static_cast<unsigned long long>(r.seed));
  w.key("per_start").begin_array();
  for (const StartRecord& s : r.per_start) {
    w.begin_object();
    w.key("index").value(static_cast<long long>(s.index));
    w.key("start");
    write_params(w, s.start);
    w.key("final_j");
    write_optional(w, s.final_j);
    w.key("evaluations").value(static_cast<long long>(s.evaluations));
    w.key("converged").value(s.converged);
    w.key("discarded").value(s.discarded);
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

}  // namespace

std::string estimation_result_json(const EstimationResult& result) {
  JsonWriter w;
  write_result(w, result);
  return w.str() + "\n";
}

std::string sweep_report_json(const SweepReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("scales").begin_array();
  for (const double s : report.scales) w.value(s);
  w.end_array();
  w.key("rows").begin_array();
  for (const SweepRow& row : report.rows) {
    w.begin_object();
    w.key("sigma").value(row.sigma);
    w.key("failed").value(row.failed);
    if (row.failed) {
      w.key("error").value(row.error);
    } else {
      w.key("result");
      write_result(w, row.result);
      w.key("metrics").begin_object();
      for (const auto& [dataset, metrics] : row.metrics) {
        w.key(dataset);
        write_channel_metrics(w, metrics);
      }
      w.end_object();
    }
    w.end_object();
  }
  w.end_array();
  w.key("selected_sigma").value(report.selected_sigma);
  w.key("selection_rule").value(report.selection_rule);
  w.key("master_seed")
      .value(static_cast<unsigned long long>(report.master_seed));
  w.key("config_digest").value(report.config_digest);
  w.end_object();
  return w.str() + "\n";
}

std::string evaluation_json(
    const std::map<std::string, ChannelMetrics>& by_dataset) {
  JsonWriter w;
  w.begin_object();
  for (const auto& [dataset, metrics] : by_dataset) {
    w.key(dataset);
    write_channel_metrics(w, metrics);
  }
  w.end_object();
  return w.str() + "\n";
}

namespace {

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
};

std::string svg_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string render_chart(const std::string& title,
                         const std::vector<PlotSeries>& series) {
  constexpr double width = 720, height = 480;
  constexpr double ml = 80, mr = 24, mt = 48, mb = 56;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;

  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (first) {
        x_min = x_max = x;
        y_min = y_max = y;
        first = false;
      } else {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
      }
    }
  }
  if (x_max - x_min < 1e-12) x_max = x_min + 1.0;
  const double y_pad = std::max(0.05 * (y_max - y_min), 1e-9);
  y_min -= y_pad;
  y_max += y_pad;

  const auto px = [&](double x) {
    return ml + (x - x_min) / (x_max - x_min) * plot_w;
  };
  const auto py = [&](double y) {
    return mt + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         svg_num(width) + "\" height=\"" + svg_num(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + svg_num(width / 2) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" +
         title + "</text>\n";

  // axes
  svg += "<line x1=\"" + svg_num(ml) + "\" y1=\"" + svg_num(mt + plot_h) +
         "\" x2=\"" + svg_num(ml + plot_w) + "\" y2=\"" +
         svg_num(mt + plot_h) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + svg_num(ml) + "\" y1=\"" + svg_num(mt) +
         "\" x2=\"" + svg_num(ml) + "\" y2=\"" + svg_num(mt + plot_h) +
         "\" stroke=\"black\"/>\n";

  constexpr int kTicks = 6;
  for (int i = 0; i < kTicks; ++i) {
    const double fx = x_min + (x_max - x_min) * i / (kTicks - 1);
    const double gx = px(fx);
    svg += "<line x1=\"" + svg_num(gx) + "\" y1=\"" + svg_num(mt + plot_h) +
           "\" x2=\"" + svg_num(gx) + "\" y2=\"" +
           svg_num(mt + plot_h + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + svg_num(gx) + "\" y=\"" +
           svg_num(mt + plot_h + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           svg_num(fx) + "</text>\n";

    const double fy = y_min + (y_max - y_min) * i / (kTicks - 1);
    const double gy = py(fy);
    svg += "<line x1=\"" + svg_num(ml - 5) + "\" y1=\"" + svg_num(gy) +
           "\" x2=\"" + svg_num(ml) + "\" y2=\"" + svg_num(gy) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + svg_num(ml - 8) + "\" y=\"" + svg_num(gy + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">" +
           svg_num(fy) + "</text>\n";
  }
  svg += "<text x=\"" + svg_num(ml + plot_w / 2) + "\" y=\"" +
         svg_num(height - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">noise scale (sigma)</text>\n";

  double legend_y = mt + 14;
  for (const auto& s : series) {
    if (s.points.empty()) continue;
    std::string path;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      path += (i == 0 ? "M" : " L");
      path += svg_num(px(s.points[i].first));
      path += ' ';
      path += svg_num(py(s.points[i].second));
    }
    svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + s.color +
           "\" stroke-width=\"1.5\"/>\n";
    for (const auto& [x, y] : s.points) {
      svg += "<circle cx=\"" + svg_num(px(x)) + "\" cy=\"" +
             svg_num(py(y)) + "\" r=\"3\" fill=\"" + s.color + "\"/>\n";
    }
    svg += "<rect x=\"" + svg_num(ml + plot_w - 130) + "\" y=\"" +
           svg_num(legend_y - 9) + "\" width=\"12\" height=\"12\" fill=\"" +
           s.color + "\"/>\n";
    svg += "<text x=\"" + svg_num(ml + plot_w - 112) + "\" y=\"" +
           svg_num(legend_y + 2) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + s.label +
           "</text>\n";
    legend_y += 18;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace

void write_sweep_plots(const SweepReport& report, const std::string& dir) {
  struct MetricDef {
    const char* file;
    const char* title;
    std::optional<double> (*get)(const MetricSet&);
  };
  const MetricDef defs[] = {
      {"rmse.svg", "RMSE vs noise scale (mean over output channels)",
       [](const MetricSet& m) -> std::optional<double> { return m.rmse; }},
      {"mape.svg", "MAPE vs noise scale (mean over output channels)",
       [](const MetricSet& m) -> std::optional<double> { return m.mape; }},
      {"max_ae.svg", "Max_AE vs noise scale (mean over output channels)",
       [](const MetricSet& m) -> std::optional<double> { return m.max_ae; }},
      {"r2.svg", "R2 vs noise scale (mean over output channels)",
       [](const MetricSet& m) -> std::optional<double> { return m.r2; }},
  };
  const std::pair<const char*, const char*> datasets[] = {
      {"train", "#1f77b4"}, {"test", "#d62728"}, {"validation", "#2ca02c"}};

  for (const MetricDef& def : defs) {
    std::vector<PlotSeries> series;
    for (const auto& [dataset, color] : datasets) {
      PlotSeries s;
      s.label = dataset;
      s.color = color;
      for (const SweepRow& row : report.rows) {
        if (row.failed) continue;
        const auto it = row.metrics.find(dataset);
        if (it == row.metrics.end()) continue;
        const auto a = def.get(it->second.t_co);
        const auto b = def.get(it->second.t_ho);
        if (a && b) s.points.emplace_back(row.sigma, 0.5 * (*a + *b));
      }
      if (!s.points.empty()) series.push_back(std::move(s));
    }
    write_text_atomic(dir + "/" + def.file, render_chart(def.title, series));
  }
}

}  // namespace hxid
