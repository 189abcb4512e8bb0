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

/*
 * hxid - gray-box system identification for water-to-water plate heat
 * exchangers.
 *
 * C API over the C++ core: opaque handles, integer status codes, and a
 * thread-local last-error message. Every function returning hxid_status
 * yields HXID_OK on success; on failure the out-parameters are left
 * untouched and hxid_last_error() describes the problem.
 *
 * Conventions:
 *  * state vectors are [T_co, T_ho] (degC), inputs [T_hi, T_ci, m_h, m_c]
 *    (degC, degC, kg/s, kg/s), parameters [k1, k2, k3, k4];
 *  * rate parameters are per *model time unit*; one unit spans 30 s of wall
 *    clock, matching the 30 s identification cadence;
 *  * all randomness is deterministic: streams derive from (master seed,
 *    label) and results never depend on thread counts.
 */

#ifndef HXID_H
#define HXID_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hxid_status {
  HXID_OK = 0,
  HXID_E_ARGUMENT = 1, /* invalid argument value */
  HXID_E_DATA = 2,     /* malformed or insufficient input data */
  HXID_E_DOMAIN = 3,   /* input outside the mathematical domain */
  HXID_E_SINGULAR = 4, /* linear system has no unique solution */
  HXID_E_IO = 5,       /* file could not be read or written */
  HXID_E_INTERNAL = 6  /* broken internal invariant */
} hxid_status;

const char* hxid_status_name(hxid_status status);

/* Message for the most recent failure on the calling thread. */
const char* hxid_last_error(void);

const char* hxid_version(void);

/* Wall-clock seconds covered by one model time unit (30). */
double hxid_seconds_per_model_unit(void);

/* ---- model ---------------------------------------------------------- */

/* Derivative pair (degC per model unit) of the energy-balance dynamics. */
hxid_status hxid_ode_rhs(const double state[2], const double input[4],
                         const double params[4], double deriv[2]);

/* Unique fixed point of the dynamics for a constant input;
 * HXID_E_SINGULAR when none exists. */
hxid_status hxid_equilibrium_state(const double input[4],
                                   const double params[4], double state[2]);

/* Per-exchanger flow for two identical exchangers piped in parallel. */
double hxid_per_exchanger_flow(double total_flow);

/* Plausibility validator for measured temperatures: [-20, 150] degC. */
int hxid_plausible_temperature(double degc);

/* ---- integrators ----------------------------------------------------- */

hxid_status hxid_euler_step(const double state[2], const double input[4],
                            const double params[4], double dt,
                            double next[2]);

hxid_status hxid_rk4_step(const double state[2], const double input[4],
                          const double params[4], double dt, double next[2]);

/* Free-running simulation over n inputs (row-major n*4, zero-order hold).
 * states_out must hold n*2 doubles; states_out[0] = state0 and row i aligns
 * with input row i. use_rk4 selects the 4th-order reference method. */
hxid_status hxid_simulate(const double state0[2], const double* inputs,
                          size_t n_inputs, const double params[4], double dt,
                          int use_rk4, double* states_out);

/* ---- preprocessing primitives ---------------------------------------- */

/* Linear resampling of (times, values) onto the grid t0 + i*dt, i < n_out,
 * holding endpoint values outside the raw range. Needs n >= 2. */
hxid_status hxid_resample_linear(const double* times, const double* values,
                                 size_t n, double t0, double dt,
                                 size_t n_out, double* out);

/* Length-preserving moving median with edge replication; window must be
 * odd, >= 1 and <= n. */
hxid_status hxid_median_filter(const double* values, size_t n, size_t window,
                               double* out);

/* ---- seeds and noise injection --------------------------------------- */

/* Deterministic, collision-resistant (master seed, label) -> stream seed. */
uint64_t hxid_derive_stream_seed(uint64_t master_seed, const char* label);

/* Adds independent N(0, sigma^2) draws to both output-channel target
 * sequences (training targets only; never feed evaluation data through
 * this). sigma = 0 copies bit-exactly. In-place operation is allowed
 * (out pointers may equal in pointers). */
hxid_status hxid_inject_noise(const double* t_co, const double* t_ho,
                              size_t n, double sigma, uint64_t seed,
                              double* t_co_out, double* t_ho_out);

/* ---- metrics ---------------------------------------------------------- */

typedef struct hxid_metric_set {
  double max_ae;
  double mae;
  double mape; /* fraction; meaningful only when mape_defined */
  double mse;
  double rmse;
  double r2;   /* meaningful only when r2_defined */
  int mape_defined;
  int r2_defined;
} hxid_metric_set;

hxid_status hxid_compute_metrics(const double* measured,
                                 const double* predicted, size_t n,
                                 hxid_metric_set* out);

/* Percentage improvement of treated over vanilla; *defined is cleared when
 * vanilla == 0 (the value is then meaningless). */
hxid_status hxid_improvement_percent(double vanilla, double treated,
                                     int higher_better, double* out,
                                     int* defined);

/* ---- frames ----------------------------------------------------------- */

typedef struct hxid_frame hxid_frame;

/* Ingests long-format CSV (header `time,channel,value`) and runs the
 * two-step preprocessing (linear resampling to dt, moving median of
 * filter_window) over the intersection of channel time ranges. */
hxid_status hxid_frame_from_long_csv(const char* path, double dt,
                                     size_t filter_window, hxid_frame** out);

/* Reads a wide-format frame CSV (header `time,T_hi,T_ci,m_h,m_c,T_co,T_ho`). */
hxid_status hxid_frame_from_wide_csv(const char* path, hxid_frame** out);

hxid_status hxid_frame_write_wide_csv(const hxid_frame* frame,
                                      const char* path);

size_t hxid_frame_size(const hxid_frame* frame);
double hxid_frame_t0(const hxid_frame* frame);
double hxid_frame_dt(const hxid_frame* frame);

/* Borrowed pointer into the frame's column for a channel name ("T_hi",
 * "T_ci", "m_h", "m_c", "T_co", "T_ho"); valid until the frame is freed. */
hxid_status hxid_frame_channel(const hxid_frame* frame, const char* channel,
                               const double** data, size_t* n);

/* Chronological split: first train_hours (boundary sample included), then
 * the immediately following test_hours. Either out pointer may be NULL. */
hxid_status hxid_frame_split(const hxid_frame* frame, double train_hours,
                             double test_hours, hxid_frame** train,
                             hxid_frame** test);

void hxid_frame_free(hxid_frame* frame);

/* ---- synthetic scenarios ---------------------------------------------- */

/* Writes change-of-value telemetry CSVs for a named scenario into out_dir:
 * `<name>.csv`, plus `<name>_validation.csv` for scenarios with a
 * validation twin. Scenarios: "roundtrip" (well-specified, exactly
 * fittable), "misspecified" (modulated heat transfer + sensor lag + twin).
 * duration_hours <= 0 selects the scenario default. */
hxid_status hxid_scenario_write(const char* name, uint64_t seed,
                                double duration_hours, const char* out_dir);

/* ---- estimation ------------------------------------------------------- */

typedef struct hxid_estimate_opts {
  double initial[4];
  double lower[4];
  double upper[4];
  double sigma;         /* training-target noise scale, degC */
  uint64_t master_seed; /* run seed derives from (master_seed, sigma) */
  double model_step;    /* integration step per sample, model units;
                         * <= 0 derives it from the frame cadence */
  int budget;           /* max objective evaluations per start */
  int n_starts;         /* multi-start count including the initial guess */
  int jobs;             /* worker threads; never changes results */
  const char* iteration_log_path; /* optional `start,evaluations,J` log */
} hxid_estimate_opts;

/* Fills the documented defaults: initial [0.1,0.1,0.1,0.1], bounds
 * k1 in [0,1], k2 in [0,10], k3/k4 in [-50,50], sigma 0, seed 0,
 * model_step auto, budget 2000, 8 starts, 1 job. */
void hxid_estimate_opts_init(hxid_estimate_opts* opts);

typedef struct hxid_result hxid_result;

hxid_status hxid_estimate(const hxid_frame* train,
                          const hxid_estimate_opts* opts, hxid_result** out);

hxid_status hxid_result_params(const hxid_result* result, double out[4]);
double hxid_result_objective(const hxid_result* result);
int hxid_result_converged(const hxid_result* result);
long long hxid_result_evaluations(const hxid_result* result);

/* Serializes the result (deterministic layout, floats at 17 significant
 * digits); the string must be released with hxid_string_free. */
hxid_status hxid_result_to_json(const hxid_result* result, char** json);
hxid_status hxid_result_write_json(const hxid_result* result,
                                   const char* path);
void hxid_result_free(hxid_result* result);

/* Sum-of-squared-errors objective of `params` against the frame's own
 * outputs (free-running Euler from the first output sample). */
hxid_status hxid_objective(const hxid_frame* frame, const double params[4],
                           double model_step, double* j_out);

/* ---- evaluation ------------------------------------------------------- */

/* Clean-data evaluation of fitted parameters on up to three datasets
 * (test/validation may be NULL): per-dataset, per-output-channel metric
 * sets as JSON, written atomically. */
hxid_status hxid_evaluate_write_json(const hxid_frame* train,
                                     const hxid_frame* test,
                                     const hxid_frame* validation,
                                     const double params[4],
                                     double model_step, const char* path);

/* ---- noise-scale sweep ------------------------------------------------ */

typedef struct hxid_report hxid_report;

/* Runs the noise-scale study over `scales` (all >= 0): estimate per scale
 * with a seed derived from (master_seed, scale), evaluate on the clean
 * frames, select the optimum scale. test/validation may be NULL. */
hxid_status hxid_sweep(const hxid_frame* train, const hxid_frame* test,
                       const hxid_frame* validation,
                       const hxid_estimate_opts* opts, const double* scales,
                       size_t n_scales, hxid_report** out);

double hxid_report_selected_sigma(const hxid_report* report);
hxid_status hxid_report_to_json(const hxid_report* report, char** json);
hxid_status hxid_report_write_json(const hxid_report* report,
                                   const char* path);
/* One SVG chart per metric (rmse, mape, max_ae, r2) versus noise scale. */
hxid_status hxid_report_write_plots(const hxid_report* report,
                                    const char* dir);
void hxid_report_free(hxid_report* report);

void hxid_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HXID_H */
