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

// hxid command-line tool. All numerical work goes through the shared
// library's C API; this binary only handles configuration, paths and
// command dispatch.
//
// Exit codes: 0 success, 1 internal failure, 2 user/config error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hxid.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUser = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Split {
  double train_hours = 0.0;
  double test_hours = 0.0;
};

struct Config {
  std::uint64_t seed = 1;
  std::string scenario = "misspecified";
  double duration_hours = 0.0;  // 0 = scenario default
  std::string in;
  std::string validation;
  std::string out;
  double dt = 30.0;
  int filter_window = 5;
  std::optional<Split> split = Split{25.0, 114.0};  // D2
  double sigma = 0.0;
  std::vector<double> scales = {0.0, 0.05, 0.1, 0.2,  0.35, 0.5,
                                0.75, 1.0, 1.5,  2.0, 2.5};
  std::array<double, 4> initial = {0.1, 0.1, 0.1, 0.1};
  std::array<double, 4> lower = {0.0, 0.0, -50.0, -50.0};
  std::array<double, 4> upper = {1.0, 10.0, 50.0, 50.0};
  int budget = 2000;
  int n_starts = 8;
  double model_step = 0.0;  // 0 = derive from frame cadence
  int jobs = 1;
  std::optional<std::array<double, 4>> params;
  std::string params_file;
  std::string plots_dir;
  std::string iteration_log;
  bool progress = false;
};

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "seed",       "scenario",  "duration_hours", "in",
      "validation", "out",       "dt",             "filter_window",
      "split",      "sigma",     "scales",         "initial",
      "bounds",     "budget",    "n_starts",       "model_step",
      "jobs",       "params",    "params_file",    "plots_dir",
      "iteration_log", "progress"};
  return keys;
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) {
    throw ConfigError("config key '" + key + "' must be a number");
  }
  return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) {
    throw ConfigError("config key '" + key + "' must be an integer");
  }
  return v.get<int>();
}

std::array<double, 4> as_quad(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 4) {
    throw ConfigError("config key '" + key +
                      "' must be an array of 4 numbers");
  }
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) out[i] = as_number(v[i], key);
  return out;
}

std::optional<Split> parse_split(const json& v) {
  if (v.is_null()) return std::nullopt;
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "none") return std::nullopt;
    if (s == "D1") return Split{11.0, 128.0};
    if (s == "D2") return Split{25.0, 114.0};
    if (s == "D3") return Split{53.0, 86.0};
    throw ConfigError("unknown split preset '" + s +
                      "' (expected D1, D2, D3 or none)");
  }
  if (v.is_object()) {
    for (const auto& [k, unused] : v.items()) {
      if (k != "train_hours" && k != "test_hours") {
        throw ConfigError("unknown split key '" + k + "'");
      }
    }
    Split s;
    s.train_hours = as_number(v.at("train_hours"), "split.train_hours");
    s.test_hours = v.contains("test_hours")
                       ? as_number(v["test_hours"], "split.test_hours")
                       : 0.0;
    return s;
  }
  throw ConfigError("config key 'split' must be a preset name or an object");
}

Config load_config(const std::string& path) {
  Config cfg;
  if (path.empty()) return cfg;

  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  for (const auto& [key, unused] : j.items()) {
    if (!known_keys().count(key)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      throw ConfigError("config key 'seed' must be a non-negative integer");
    }
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("scenario")) cfg.scenario = j["scenario"].get<std::string>();
  if (j.contains("duration_hours")) {
    cfg.duration_hours = as_number(j["duration_hours"], "duration_hours");
  }
  if (j.contains("in")) cfg.in = j["in"].get<std::string>();
  if (j.contains("validation")) {
    cfg.validation = j["validation"].get<std::string>();
  }
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  if (j.contains("dt")) cfg.dt = as_number(j["dt"], "dt");
  if (j.contains("filter_window")) {
    cfg.filter_window = as_int(j["filter_window"], "filter_window");
  }
  if (j.contains("split")) cfg.split = parse_split(j["split"]);
  if (j.contains("sigma")) cfg.sigma = as_number(j["sigma"], "sigma");
  if (j.contains("scales")) {
    if (!j["scales"].is_array() || j["scales"].empty()) {
      throw ConfigError("config key 'scales' must be a non-empty array");
    }
    cfg.scales.clear();
    for (const auto& v : j["scales"]) {
      cfg.scales.push_back(as_number(v, "scales"));
    }
  }
  if (j.contains("initial")) cfg.initial = as_quad(j["initial"], "initial");
  if (j.contains("bounds")) {
    const auto& b = j["bounds"];
    if (!b.is_object()) {
      throw ConfigError("config key 'bounds' must be an object");
    }
    for (const auto& [k, unused] : b.items()) {
      if (k != "k1" && k != "k2" && k != "k3" && k != "k4") {
        throw ConfigError("unknown bounds key '" + k + "'");
      }
    }
    const char* names[4] = {"k1", "k2", "k3", "k4"};
    for (int i = 0; i < 4; ++i) {
      if (!b.contains(names[i])) continue;
      const auto& pair = b[names[i]];
      if (!pair.is_array() || pair.size() != 2) {
        throw ConfigError("bounds entries must be [lower, upper] pairs");
      }
      cfg.lower[i] = as_number(pair[0], "bounds");
      cfg.upper[i] = as_number(pair[1], "bounds");
    }
  }
  if (j.contains("budget")) cfg.budget = as_int(j["budget"], "budget");
  if (j.contains("n_starts")) cfg.n_starts = as_int(j["n_starts"], "n_starts");
  if (j.contains("model_step")) {
    cfg.model_step = as_number(j["model_step"], "model_step");
  }
  if (j.contains("jobs")) cfg.jobs = as_int(j["jobs"], "jobs");
  if (j.contains("params")) {
    if (!j["params"].is_null()) cfg.params = as_quad(j["params"], "params");
  }
  if (j.contains("params_file")) {
    cfg.params_file = j["params_file"].get<std::string>();
  }
  if (j.contains("plots_dir")) {
    cfg.plots_dir = j["plots_dir"].get<std::string>();
  }
  if (j.contains("iteration_log")) {
    cfg.iteration_log = j["iteration_log"].get<std::string>();
  }
  if (j.contains("progress")) {
    if (!j["progress"].is_boolean()) {
      throw ConfigError("config key 'progress' must be a boolean");
    }
    cfg.progress = j["progress"].get<bool>();
  }
  return cfg;
}

int report_status(hxid_status status) {
  std::cerr << "hxid: " << hxid_status_name(status) << ": "
            << hxid_last_error() << "\n";
  return status == HXID_E_INTERNAL ? kExitInternal : kExitUser;
}

int report_config_error(const std::string& message) {
  std::cerr << "hxid: config error: " << message << "\n";
  return kExitUser;
}

struct FrameDeleter {
  void operator()(hxid_frame* f) const { hxid_frame_free(f); }
};
using FramePtr = std::unique_ptr<hxid_frame, FrameDeleter>;

struct ResultDeleter {
  void operator()(hxid_result* r) const { hxid_result_free(r); }
};
using ResultPtr = std::unique_ptr<hxid_result, ResultDeleter>;

struct ReportDeleter {
  void operator()(hxid_report* r) const { hxid_report_free(r); }
};
using ReportPtr = std::unique_ptr<hxid_report, ReportDeleter>;

hxid_estimate_opts make_opts(const Config& cfg) {
  hxid_estimate_opts opts;
  hxid_estimate_opts_init(&opts);
  for (int i = 0; i < 4; ++i) {
    opts.initial[i] = cfg.initial[i];
    opts.lower[i] = cfg.lower[i];
    opts.upper[i] = cfg.upper[i];
  }
  opts.sigma = cfg.sigma;
  opts.master_seed = cfg.seed;
  opts.model_step = cfg.model_step;
  opts.budget = cfg.budget;
  opts.n_starts = cfg.n_starts;
  opts.jobs = cfg.jobs;
  opts.iteration_log_path =
      cfg.iteration_log.empty() ? nullptr : cfg.iteration_log.c_str();
  return opts;
}

/// Loads the wide-CSV frame named by cfg.in and applies the configured
/// chronological split. test stays null without a split or when the split
/// has no test hours.
int load_training_frames(const Config& cfg, FramePtr& train, FramePtr& test) {
  if (cfg.in.empty()) {
    return report_config_error("'in' (wide frame CSV) is required");
  }
  hxid_frame* full_raw = nullptr;
  if (const auto s = hxid_frame_from_wide_csv(cfg.in.c_str(), &full_raw)) {
    return report_status(s);
  }
  FramePtr full(full_raw);
  if (!cfg.split) {
    train = std::move(full);
    return kExitOk;
  }
  hxid_frame* train_raw = nullptr;
  hxid_frame* test_raw = nullptr;
  if (const auto s = hxid_frame_split(full.get(), cfg.split->train_hours,
                                      cfg.split->test_hours, &train_raw,
                                      &test_raw)) {
    return report_status(s);
  }
  train.reset(train_raw);
  test.reset(test_raw);
  if (hxid_frame_size(test.get()) == 0) test.reset();
  return kExitOk;
}

int load_validation_frame(const Config& cfg, FramePtr& validation) {
  if (cfg.validation.empty()) return kExitOk;
  hxid_frame* raw = nullptr;
  if (const auto s = hxid_frame_from_wide_csv(cfg.validation.c_str(), &raw)) {
    return report_status(s);
  }
  validation.reset(raw);
  return kExitOk;
}

int cmd_gen(const Config& cfg) {
  const std::string out_dir = cfg.out.empty() ? "data" : cfg.out;
  if (const auto s = hxid_scenario_write(cfg.scenario.c_str(), cfg.seed,
                                         cfg.duration_hours,
                                         out_dir.c_str())) {
    return report_status(s);
  }
  if (cfg.progress) {
    std::cout << "wrote " << out_dir << "/" << cfg.scenario << ".csv\n";
    if (cfg.scenario == "misspecified") {
      std::cout << "wrote " << out_dir << "/" << cfg.scenario
                << "_validation.csv\n";
    }
  }
  return kExitOk;
}

int cmd_prep(const Config& cfg) {
  if (cfg.in.empty()) {
    return report_config_error("'in' (long telemetry CSV) is required");
  }
  const std::string out = cfg.out.empty() ? "frame.csv" : cfg.out;
  hxid_frame* raw = nullptr;
  if (const auto s = hxid_frame_from_long_csv(
          cfg.in.c_str(), cfg.dt, static_cast<size_t>(cfg.filter_window),
          &raw)) {
    return report_status(s);
  }
  FramePtr frame(raw);
  if (const auto s = hxid_frame_write_wide_csv(frame.get(), out.c_str())) {
    return report_status(s);
  }
  if (cfg.progress) {
    std::cout << "wrote " << out << " (" << hxid_frame_size(frame.get())
              << " samples at dt=" << hxid_frame_dt(frame.get()) << ")\n";
  }
  return kExitOk;
}

int cmd_estimate(const Config& cfg) {
  FramePtr train, test;
  if (const int rc = load_training_frames(cfg, train, test)) return rc;

  const hxid_estimate_opts opts = make_opts(cfg);
  hxid_result* raw = nullptr;
  if (const auto s = hxid_estimate(train.get(), &opts, &raw)) {
    return report_status(s);
  }
  ResultPtr result(raw);
  const std::string out = cfg.out.empty() ? "estimate.json" : cfg.out;
  if (const auto s = hxid_result_write_json(result.get(), out.c_str())) {
    return report_status(s);
  }
  if (cfg.progress) {
    double k[4];
    hxid_result_params(result.get(), k);
    std::cout << "wrote " << out
              << " (J=" << hxid_result_objective(result.get()) << ", k=["
              << k[0] << "," << k[1] << "," << k[2] << "," << k[3] << "])\n";
  }
  return kExitOk;
}

int resolve_params(const Config& cfg, std::array<double, 4>& params) {
  if (cfg.params) {
    params = *cfg.params;
    return kExitOk;
  }
  if (cfg.params_file.empty()) {
    return report_config_error(
        "'params' or 'params_file' is required for evaluate");
  }
  std::ifstream in(cfg.params_file);
  if (!in) {
    return report_config_error("cannot open params_file: " + cfg.params_file);
  }
  try {
    const json j = json::parse(in);
    const auto& p = j.at("params");
    if (!p.is_array() || p.size() != 4) {
      return report_config_error(
          "params_file must carry a 4-element 'params'");
    }
    for (int i = 0; i < 4; ++i) params[i] = p[i].get<double>();
  } catch (const json::exception& e) {
    return report_config_error(std::string("bad params_file: ") + e.what());
  }
  return kExitOk;
}

int cmd_evaluate(const Config& cfg) {
  FramePtr train, test, validation;
  if (const int rc = load_training_frames(cfg, train, test)) return rc;
  if (const int rc = load_validation_frame(cfg, validation)) return rc;

  std::array<double, 4> params{};
  if (const int rc = resolve_params(cfg, params)) return rc;

  const std::string out = cfg.out.empty() ? "metrics.json" : cfg.out;
  if (const auto s = hxid_evaluate_write_json(train.get(), test.get(),
                                              validation.get(), params.data(),
                                              cfg.model_step, out.c_str())) {
    return report_status(s);
  }
  if (cfg.progress) std::cout << "wrote " << out << "\n";
  return kExitOk;
}

int cmd_sweep(const Config& cfg) {
  FramePtr train, test, validation;
  if (const int rc = load_training_frames(cfg, train, test)) return rc;
  if (const int rc = load_validation_frame(cfg, validation)) return rc;

  const hxid_estimate_opts opts = make_opts(cfg);
  hxid_report* raw = nullptr;
  if (const auto s = hxid_sweep(train.get(), test.get(), validation.get(),
                                &opts, cfg.scales.data(), cfg.scales.size(),
                                &raw)) {
    return report_status(s);
  }
  ReportPtr report(raw);

  const std::string out = cfg.out.empty() ? "sweep.json" : cfg.out;
  if (const auto s = hxid_report_write_json(report.get(), out.c_str())) {
    return report_status(s);
  }
  std::string plots = cfg.plots_dir;
  if (plots.empty()) {
    const fs::path parent = fs::path(out).parent_path();
    plots = (parent.empty() ? fs::path("plots") : parent / "plots").string();
  }
  if (const auto s = hxid_report_write_plots(report.get(), plots.c_str())) {
    return report_status(s);
  }
  if (cfg.progress) {
    std::cout << "wrote " << out << " (selected sigma="
              << hxid_report_selected_sigma(report.get()) << ")\n";
    std::cout << "wrote " << plots << "/{rmse,mape,max_ae,r2}.svg\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hxid: gray-box heat-exchanger system identification"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<double> dt_flag, sigma_flag;
  std::optional<std::uint64_t> seed_flag;
  std::optional<std::string> split_flag, out_flag, in_flag, validation_flag;
  std::optional<int> jobs_flag;
  bool progress_flag = false;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--dt", dt_flag, "resampling step, seconds");
    cmd->add_option("--sigma", sigma_flag, "training noise scale, degC");
    cmd->add_option("--seed", seed_flag, "master seed");
    cmd->add_option("--split", split_flag,
                    "train/test split: D1, D2, D3 or none");
    cmd->add_option("--jobs", jobs_flag, "worker threads");
    cmd->add_option("--out", out_flag, "output path");
    cmd->add_option("--in", in_flag, "input path");
    cmd->add_option("--validation", validation_flag,
                    "validation frame CSV (evaluate/sweep)");
    cmd->add_flag("--progress", progress_flag,
                  "print progress lines to stdout");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate scenario telemetry CSVs");
  CLI::App* prep =
      app.add_subcommand("prep", "preprocess telemetry into a frame");
  CLI::App* estimate =
      app.add_subcommand("estimate", "fit model parameters");
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "score parameters on datasets");
  CLI::App* sweep =
      app.add_subcommand("sweep", "noise-scale study with report and plots");
  for (CLI::App* cmd : {gen, prep, estimate, evaluate, sweep}) {
    add_common(cmd);
  }

  std::string scenario_flag;
  gen->add_option("--scenario", scenario_flag,
                  "scenario name: roundtrip or misspecified");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "hxid: " << e.what() << "\n";
    return kExitUser;
  }

  Config cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    return report_config_error(e.what());
  }
  if (dt_flag) cfg.dt = *dt_flag;
  if (sigma_flag) cfg.sigma = *sigma_flag;
  if (seed_flag) cfg.seed = *seed_flag;
  if (jobs_flag) cfg.jobs = *jobs_flag;
  if (out_flag) cfg.out = *out_flag;
  if (in_flag) cfg.in = *in_flag;
  if (validation_flag) cfg.validation = *validation_flag;
  if (progress_flag) cfg.progress = true;
  if (!scenario_flag.empty()) cfg.scenario = scenario_flag;
  if (split_flag) {
    try {
      cfg.split = parse_split(json(*split_flag));
    } catch (const ConfigError& e) {
      return report_config_error(e.what());
    }
  }

  try {
    if (gen->parsed()) return cmd_gen(cfg);
    if (prep->parsed()) return cmd_prep(cfg);
    if (estimate->parsed()) return cmd_estimate(cfg);
    if (evaluate->parsed()) return cmd_evaluate(cfg);
    if (sweep->parsed()) return cmd_sweep(cfg);
  } catch (const std::exception& e) {
    std::cerr << "hxid: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUser;
}
