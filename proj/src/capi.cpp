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

#include "hxid.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "csv.hpp"
#include "errors.hpp"
#include "estimate.hpp"
#include "integrate.hpp"
#include "metrics.hpp"
#include "model.hpp"
#include "noise.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "sweep.hpp"
#include "synth.hpp"
#include "timeseries.hpp"

using namespace hxid;

extern "C" {
struct hxid_frame {
  RegularFrame frame;
};
struct hxid_result {
  EstimationResult result;
};
struct hxid_report {
  SweepReport report;
};
}

namespace {

thread_local std::string t_last_error;

hxid_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::argument: return HXID_E_ARGUMENT;
    case ErrorKind::data: return HXID_E_DATA;
    case ErrorKind::domain: return HXID_E_DOMAIN;
    case ErrorKind::singular: return HXID_E_SINGULAR;
    case ErrorKind::io: return HXID_E_IO;
    case ErrorKind::internal: return HXID_E_INTERNAL;
  }
  return HXID_E_INTERNAL;
}

/// Runs fn, converting exceptions to status codes and recording the message.
template <typename Fn>
hxid_status guarded(Fn&& fn) {
  try {
    fn();
    return HXID_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return HXID_E_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return HXID_E_INTERNAL;
  }
}

hxid_status require(bool ok, const char* message) {
  if (ok) return HXID_OK;
  t_last_error = message;
  return HXID_E_ARGUMENT;
}

ModelState to_state(const double s[2]) { return {s[0], s[1]}; }
InputVector to_input(const double u[4]) { return {u[0], u[1], u[2], u[3]}; }
ParameterVector to_params(const double k[4]) {
  return {k[0], k[1], k[2], k[3]};
}

hxid_estimate_opts default_opts() {
  hxid_estimate_opts o;
  const EstimationProblem p;
  const auto init = p.initial.to_array();
  for (int i = 0; i < 4; ++i) {
    o.initial[i] = init[i];
    o.lower[i] = p.bounds.lower[i];
    o.upper[i] = p.bounds.upper[i];
  }
  o.sigma = 0.0;
  o.master_seed = 0;
  o.model_step = 0.0;  // auto: frame.dt / seconds-per-model-unit
  o.budget = p.budget;
  o.n_starts = p.n_starts;
  o.jobs = 1;
  o.iteration_log_path = nullptr;
  return o;
}

double resolve_model_step(const hxid_estimate_opts& o,
                          const RegularFrame& frame) {
  return o.model_step > 0.0 ? o.model_step : model_units(frame.dt);
}

EstimationProblem build_problem(const RegularFrame& frame,
                                const hxid_estimate_opts& o) {
  EstimationProblem p;
  p.frame = frame;
  p.initial = to_params(o.initial);
  for (int i = 0; i < 4; ++i) {
    p.bounds.lower[i] = o.lower[i];
    p.bounds.upper[i] = o.upper[i];
  }
  p.noise.sigma = o.sigma;
  p.noise.seed = run_seed_for(o.master_seed, o.sigma);
  p.dt = resolve_model_step(o, frame);
  p.budget = o.budget;
  p.n_starts = o.n_starts;
  p.jobs = o.jobs;
  return p;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* hxid_status_name(hxid_status status) {
  switch (status) {
    case HXID_OK: return "ok";
    case HXID_E_ARGUMENT: return "argument error";
    case HXID_E_DATA: return "data error";
    case HXID_E_DOMAIN: return "domain error";
    case HXID_E_SINGULAR: return "singular system";
    case HXID_E_IO: return "io error";
    case HXID_E_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* hxid_last_error(void) { return t_last_error.c_str(); }

const char* hxid_version(void) { return "0.1.0"; }

double hxid_seconds_per_model_unit(void) { return kSecondsPerModelUnit; }

hxid_status hxid_ode_rhs(const double state[2], const double input[4],
                         const double params[4], double deriv[2]) {
  if (auto s = require(state && input && params && deriv, "null pointer"))
    return s;
  return guarded([&] {
    const StateRate r = ode_rhs(to_state(state), to_input(input),
                                to_params(params));
    deriv[0] = r.d_t_co;
    deriv[1] = r.d_t_ho;
  });
}

hxid_status hxid_equilibrium_state(const double input[4],
                                   const double params[4], double state[2]) {
  if (auto s = require(input && params && state, "null pointer")) return s;
  return guarded([&] {
    const ModelState eq = equilibrium_state(to_input(input),
                                            to_params(params));
    state[0] = eq.t_co;
    state[1] = eq.t_ho;
  });
}

double hxid_per_exchanger_flow(double total_flow) {
  return per_exchanger_flow(total_flow);
}

int hxid_plausible_temperature(double degc) {
  return plausible_temperature(degc) ? 1 : 0;
}

hxid_status hxid_euler_step(const double state[2], const double input[4],
                            const double params[4], double dt,
                            double next[2]) {
  if (auto s = require(state && input && params && next, "null pointer"))
    return s;
  return guarded([&] {
    const ModelState x = euler_step(to_state(state), to_input(input),
                                    to_params(params), dt);
    next[0] = x.t_co;
    next[1] = x.t_ho;
  });
}

hxid_status hxid_rk4_step(const double state[2], const double input[4],
                          const double params[4], double dt, double next[2]) {
  if (auto s = require(state && input && params && next, "null pointer"))
    return s;
  return guarded([&] {
    const ModelState x = rk4_step(to_state(state), to_input(input),
                                  to_params(params), dt);
    next[0] = x.t_co;
    next[1] = x.t_ho;
  });
}

hxid_status hxid_simulate(const double state0[2], const double* inputs,
                          size_t n_inputs, const double params[4], double dt,
                          int use_rk4, double* states_out) {
  if (auto s = require(state0 && inputs && params && states_out,
                       "null pointer"))
    return s;
  return guarded([&] {
    std::vector<InputVector> u(n_inputs);
    for (size_t i = 0; i < n_inputs; ++i) u[i] = to_input(inputs + 4 * i);
    const Trajectory traj =
        simulate(to_state(state0), u, to_params(params), dt,
                 use_rk4 ? Method::rk4 : Method::euler);
    for (size_t i = 0; i < traj.size(); ++i) {
      states_out[2 * i] = traj.states[i].t_co;
      states_out[2 * i + 1] = traj.states[i].t_ho;
    }
  });
}

hxid_status hxid_resample_linear(const double* times, const double* values,
                                 size_t n, double t0, double dt,
                                 size_t n_out, double* out) {
  if (auto s = require(times && values && out, "null pointer")) return s;
  return guarded([&] {
    IrregularSeries series;
    series.samples.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      if (i > 0 && !(times[i] > times[i - 1])) {
        throw Error(ErrorKind::data, "timestamps must strictly increase");
      }
      series.samples.push_back({times[i], values[i]});
    }
    const auto v = resample_linear(series, t0, dt, n_out);
    std::memcpy(out, v.data(), v.size() * sizeof(double));
  });
}

hxid_status hxid_median_filter(const double* values, size_t n, size_t window,
                               double* out) {
  if (auto s = require(values && out, "null pointer")) return s;
  return guarded([&] {
    const auto v = median_filter(std::span<const double>(values, n), window);
    std::memcpy(out, v.data(), v.size() * sizeof(double));
  });
}

uint64_t hxid_derive_stream_seed(uint64_t master_seed, const char* label) {
  return derive_stream_seed(master_seed, label ? label : "");
}

hxid_status hxid_inject_noise(const double* t_co, const double* t_ho,
                              size_t n, double sigma, uint64_t seed,
                              double* t_co_out, double* t_ho_out) {
  if (auto s = require(t_co && t_ho && t_co_out && t_ho_out, "null pointer"))
    return s;
  return guarded([&] {
    OutputTargets targets{{t_co, t_co + n}, {t_ho, t_ho + n}};
    const OutputTargets out = inject_noise(targets, {sigma, seed});
    std::memcpy(t_co_out, out.t_co.data(), n * sizeof(double));
    std::memcpy(t_ho_out, out.t_ho.data(), n * sizeof(double));
  });
}

hxid_status hxid_compute_metrics(const double* measured,
                                 const double* predicted, size_t n,
                                 hxid_metric_set* out) {
  if (auto s = require(measured && predicted && out, "null pointer"))
    return s;
  return guarded([&] {
    const MetricSet m = compute_metrics(
        std::span<const double>(measured, n),
        std::span<const double>(predicted, n));
    out->max_ae = m.max_ae;
    out->mae = m.mae;
    out->mse = m.mse;
    out->rmse = m.rmse;
    out->mape = m.mape.value_or(0.0);
    out->mape_defined = m.mape.has_value() ? 1 : 0;
    out->r2 = m.r2.value_or(0.0);
    out->r2_defined = m.r2.has_value() ? 1 : 0;
  });
}

hxid_status hxid_improvement_percent(double vanilla, double treated,
                                     int higher_better, double* out,
                                     int* defined) {
  if (auto s = require(out && defined, "null pointer")) return s;
  return guarded([&] {
    const auto v = improvement_percent(vanilla, treated,
                                       higher_better
                                           ? Orientation::higher_better
                                           : Orientation::lower_better);
    *defined = v.has_value() ? 1 : 0;
    *out = v.value_or(0.0);
  });
}

hxid_status hxid_frame_from_long_csv(const char* path, double dt,
                                     size_t filter_window, hxid_frame** out) {
  if (auto s = require(path && out, "null pointer")) return s;
  return guarded([&] {
    const auto series = read_long_csv(path);
    auto* f = new hxid_frame{build_frame(series, dt, filter_window)};
    *out = f;
  });
}

hxid_status hxid_frame_from_wide_csv(const char* path, hxid_frame** out) {
  if (auto s = require(path && out, "null pointer")) return s;
  return guarded([&] { *out = new hxid_frame{read_wide_csv(path)}; });
}

hxid_status hxid_frame_write_wide_csv(const hxid_frame* frame,
                                      const char* path) {
  if (auto s = require(frame && path, "null pointer")) return s;
  return guarded([&] { write_wide_csv(path, frame->frame); });
}

size_t hxid_frame_size(const hxid_frame* frame) {
  return frame ? frame->frame.size() : 0;
}

double hxid_frame_t0(const hxid_frame* frame) {
  return frame ? frame->frame.t0 : 0.0;
}

double hxid_frame_dt(const hxid_frame* frame) {
  return frame ? frame->frame.dt : 0.0;
}

hxid_status hxid_frame_channel(const hxid_frame* frame, const char* channel,
                               const double** data, size_t* n) {
  if (auto s = require(frame && channel && data && n, "null pointer"))
    return s;
  return guarded([&] {
    const auto c = channel_from_name(channel);
    if (!c) {
      throw Error(ErrorKind::argument,
                  std::string("unknown channel: ") + channel);
    }
    const auto col = frame->frame.col(*c);
    *data = col.data();
    *n = col.size();
  });
}

hxid_status hxid_frame_split(const hxid_frame* frame, double train_hours,
                             double test_hours, hxid_frame** train,
                             hxid_frame** test) {
  if (auto s = require(frame != nullptr, "null pointer")) return s;
  return guarded([&] {
    SplitSpec spec{train_hours, test_hours, "custom"};
    auto [tr, te] = split_frame(frame->frame, spec);
    std::unique_ptr<hxid_frame> t1(
        train ? new hxid_frame{std::move(tr)} : nullptr);
    std::unique_ptr<hxid_frame> t2(
        test ? new hxid_frame{std::move(te)} : nullptr);
    if (train) *train = t1.release();
    if (test) *test = t2.release();
  });
}

void hxid_frame_free(hxid_frame* frame) { delete frame; }

hxid_status hxid_scenario_write(const char* name, uint64_t seed,
                                double duration_hours, const char* out_dir) {
  if (auto s = require(name && out_dir, "null pointer")) return s;
  return guarded([&] {
    ScenarioSpec spec = scenario_by_name(name, seed);
    if (duration_hours > 0.0) spec.duration_hours = duration_hours;
    const std::string base = std::string(out_dir) + "/" + spec.name;

    if (spec.name == "roundtrip") {
      const RegularFrame frame = generate_euler_frame(spec);
      // Regular samples dumped as change-of-value telemetry rows.
      std::vector<IrregularSeries> series(kChannelCount);
      for (std::size_t c = 0; c < kChannelCount; ++c) {
        series[c].channel = static_cast<Channel>(c);
        const auto col = frame.col(static_cast<Channel>(c));
        series[c].samples.reserve(col.size());
        for (std::size_t i = 0; i < col.size(); ++i) {
          series[c].samples.push_back({frame.time_at(i), col[i]});
        }
      }
      write_long_csv(base + ".csv", series);
      return;
    }

    // Scenarios with sensor degradation and a validation twin.
    const RegularFrame fine2 = generate_truth(spec);
    write_long_csv(base + ".csv", degrade(fine2, spec));

    const ScenarioSpec twin = validation_twin(spec);
    const RegularFrame fine1 = generate_truth(twin);
    write_long_csv(base + "_validation.csv", degrade(fine1, twin));
  });
}

void hxid_estimate_opts_init(hxid_estimate_opts* opts) {
  if (opts) *opts = default_opts();
}

hxid_status hxid_estimate(const hxid_frame* train,
                          const hxid_estimate_opts* opts, hxid_result** out) {
  if (auto s = require(train && opts && out, "null pointer")) return s;
  return guarded([&] {
    const EstimationProblem problem = build_problem(train->frame, *opts);
    EstimationResult result;
    if (opts->iteration_log_path) {
      std::string log;
      result = estimate(problem, [&](int start, long long evals, double j) {
        log += std::to_string(start);
        log += ',';
        log += std::to_string(evals);
        log += ',';
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", j);
        log += buf;
        log += '\n';
      });
      write_text_atomic(opts->iteration_log_path, log);
    } else {
      result = estimate(problem);
    }
    *out = new hxid_result{std::move(result)};
  });
}

hxid_status hxid_result_params(const hxid_result* result, double out[4]) {
  if (auto s = require(result && out, "null pointer")) return s;
  const auto a = result->result.params.to_array();
  for (int i = 0; i < 4; ++i) out[i] = a[i];
  return HXID_OK;
}

double hxid_result_objective(const hxid_result* result) {
  return result ? result->result.objective : 0.0;
}

int hxid_result_converged(const hxid_result* result) {
  return result && result->result.converged ? 1 : 0;
}

long long hxid_result_evaluations(const hxid_result* result) {
  return result ? result->result.evaluations : 0;
}

hxid_status hxid_result_to_json(const hxid_result* result, char** json) {
  if (auto s = require(result && json, "null pointer")) return s;
  return guarded(
      [&] { *json = dup_string(estimation_result_json(result->result)); });
}

hxid_status hxid_result_write_json(const hxid_result* result,
                                   const char* path) {
  if (auto s = require(result && path, "null pointer")) return s;
  return guarded(
      [&] { write_text_atomic(path, estimation_result_json(result->result)); });
}

void hxid_result_free(hxid_result* result) { delete result; }

hxid_status hxid_objective(const hxid_frame* frame, const double params[4],
                           double model_step, double* j_out) {
  if (auto s = require(frame && params && j_out, "null pointer")) return s;
  return guarded([&] {
    const RegularFrame& f = frame->frame;
    OutputTargets targets{
        {f.col(Channel::t_co).begin(), f.col(Channel::t_co).end()},
        {f.col(Channel::t_ho).begin(), f.col(Channel::t_ho).end()}};
    const double dt = model_step > 0.0 ? model_step : model_units(f.dt);
    *j_out = objective_j(to_params(params), f, targets, dt);
  });
}

hxid_status hxid_evaluate_write_json(const hxid_frame* train,
                                     const hxid_frame* test,
                                     const hxid_frame* validation,
                                     const double params[4],
                                     double model_step, const char* path) {
  if (auto s = require(train && params && path, "null pointer")) return s;
  return guarded([&] {
    const ParameterVector k = to_params(params);
    const double dt =
        model_step > 0.0 ? model_step : model_units(train->frame.dt);
    std::map<std::string, ChannelMetrics> by_dataset;
    by_dataset.emplace("train", evaluate_on_frame(k, train->frame, dt));
    if (test) {
      by_dataset.emplace("test", evaluate_on_frame(k, test->frame, dt));
    }
    if (validation) {
      by_dataset.emplace("validation",
                         evaluate_on_frame(k, validation->frame, dt));
    }
    write_text_atomic(path, evaluation_json(by_dataset));
  });
}

hxid_status hxid_sweep(const hxid_frame* train, const hxid_frame* test,
                       const hxid_frame* validation,
                       const hxid_estimate_opts* opts, const double* scales,
                       size_t n_scales, hxid_report** out) {
  if (auto s = require(train && opts && scales && out, "null pointer"))
    return s;
  return guarded([&] {
    EstimationProblem problem = build_problem(train->frame, *opts);
    EvalFrames eval;
    eval.train = train->frame;
    if (test) eval.test = test->frame;
    if (validation) eval.validation = validation->frame;
    const std::span<const double> grid(scales, n_scales);
    *out = new hxid_report{run_sweep(problem, opts->master_seed, grid, eval,
                                     opts->jobs)};
  });
}

double hxid_report_selected_sigma(const hxid_report* report) {
  return report ? report->report.selected_sigma : 0.0;
}

hxid_status hxid_report_to_json(const hxid_report* report, char** json) {
  if (auto s = require(report && json, "null pointer")) return s;
  return guarded(
      [&] { *json = dup_string(sweep_report_json(report->report)); });
}

hxid_status hxid_report_write_json(const hxid_report* report,
                                   const char* path) {
  if (auto s = require(report && path, "null pointer")) return s;
  return guarded(
      [&] { write_text_atomic(path, sweep_report_json(report->report)); });
}

hxid_status hxid_report_write_plots(const hxid_report* report,
                                    const char* dir) {
  if (auto s = require(report && dir, "null pointer")) return s;
  return guarded([&] {
    std::filesystem::create_directories(dir);
    write_sweep_plots(report->report, dir);
  });
}

void hxid_report_free(hxid_report* report) { delete report; }

void hxid_string_free(char* s) { delete[] s; }

}  // extern "C"
