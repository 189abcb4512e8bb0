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

#include "sweep.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>

#include "errors.hpp"
#include "integrate.hpp"
#include "parallel.hpp"

namespace hxid {

namespace {

constexpr const char* kSelectionRuleTest =
    "minimize clean test-set RMSE averaged over both output channels; "
    "ties broken toward the smaller noise scale";
constexpr const char* kSelectionRuleTrain =
    "minimize clean train-set RMSE averaged over both output channels "
    "(no test frame provided); ties broken toward the smaller noise scale";

double mean_rmse(const ChannelMetrics& m) {
  return 0.5 * (m.t_co.rmse + m.t_ho.rmse);
}

std::string digest_hex(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::uint64_t fold_u64(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffULL;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fold_double(std::uint64_t h, double d) {
  std::uint64_t bits;
  static_assert(sizeof bits == sizeof d);
  __builtin_memcpy(&bits, &d, sizeof bits);
  return fold_u64(h, bits);
}

/// Digest over everything that determines sweep output: estimator knobs,
/// scales, seed and data digests.
std::string config_digest(const EstimationProblem& problem,
                          std::uint64_t master_seed,
                          std::span<const double> scales,
                          const EvalFrames& eval) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const double v : problem.initial.to_array()) h = fold_double(h, v);
  for (int i = 0; i < 4; ++i) {
    h = fold_double(h, problem.bounds.lower[i]);
    h = fold_double(h, problem.bounds.upper[i]);
  }
  h = fold_double(h, problem.dt);
  h = fold_u64(h, static_cast<std::uint64_t>(problem.budget));
  h = fold_u64(h, static_cast<std::uint64_t>(problem.n_starts));
  h = fold_double(h, problem.j_rel_tol);
  h = fold_double(h, problem.param_tol);
  h = fold_u64(h, master_seed);
  for (const double s : scales) h = fold_double(h, s);
  h = fold_u64(h, frame_digest(problem.frame));
  h = fold_u64(h, frame_digest(eval.train));
  h = fold_u64(h, eval.test ? frame_digest(*eval.test) : 0);
  h = fold_u64(h, eval.validation ? frame_digest(*eval.validation) : 0);
  return digest_hex(h);
}

}  // namespace

std::vector<double> default_scale_grid() {
  return {0.0, 0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5};
}

ChannelMetrics evaluate_on_frame(const ParameterVector& params,
                                 const RegularFrame& frame, double dt) {
  if (frame.size() == 0) {
    throw Error(ErrorKind::argument, "evaluation frame is empty");
  }
  const std::vector<InputVector> inputs = frame.inputs();
  const Trajectory traj =
      simulate(frame.output_at(0), inputs, params, dt, Method::euler);

  std::vector<double> sim_co(traj.size()), sim_ho(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    sim_co[i] = traj.states[i].t_co;
    sim_ho[i] = traj.states[i].t_ho;
  }
  return {compute_metrics(frame.col(Channel::t_co), sim_co),
          compute_metrics(frame.col(Channel::t_ho), sim_ho)};
}

double select_optimum(std::span<const SweepRow> rows, bool have_test) {
  const char* dataset = have_test ? "test" : "train";
  int best = -1;
  double best_rmse = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].failed) continue;
    const auto it = rows[i].metrics.find(dataset);
    if (it == rows[i].metrics.end()) continue;
    const double rmse = mean_rmse(it->second);
    if (best < 0 || rmse < best_rmse ||
        (rmse == best_rmse &&
         rows[i].sigma < rows[static_cast<std::size_t>(best)].sigma)) {
      best = static_cast<int>(i);
      best_rmse = rmse;
    }
  }
  if (best < 0) {
    throw Error(ErrorKind::data, "no successful sweep rows to select from");
  }
  return rows[static_cast<std::size_t>(best)].sigma;
}

SweepReport run_sweep(const EstimationProblem& problem,
                      std::uint64_t master_seed, std::span<const double> scales,
                      const EvalFrames& eval_frames, int jobs) {
  if (scales.empty()) {
    throw Error(ErrorKind::argument, "scale grid is empty");
  }
  for (const double s : scales) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw Error(ErrorKind::argument, "noise scales must be >= 0 and finite");
    }
  }
  if (eval_frames.train.size() == 0) {
    throw Error(ErrorKind::argument, "evaluation requires a train frame");
  }

  // Evaluation purity: metric computation must see unperturbed data.
  const std::uint64_t train_digest = frame_digest(eval_frames.train);
  const std::uint64_t test_digest =
      eval_frames.test ? frame_digest(*eval_frames.test) : 0;
  const std::uint64_t val_digest =
      eval_frames.validation ? frame_digest(*eval_frames.validation) : 0;

  SweepReport report;
  report.scales.assign(scales.begin(), scales.end());
  report.master_seed = master_seed;
  report.config_digest = config_digest(problem, master_seed, scales,
                                       eval_frames);
  report.rows.resize(scales.size());

  parallel_for(scales.size(), jobs, [&](std::size_t i) {
    SweepRow& row = report.rows[i];
    row.sigma = scales[i];
    EstimationProblem p = problem;
    p.noise.sigma = scales[i];
    p.noise.seed = run_seed_for(master_seed, scales[i]);
    p.jobs = 1;  // row-level parallelism only; results do not depend on it
    // Keep the model step consistent with each frame's cadence (identical
    // cadences make this an exact no-op).
    const auto step_for = [&](const RegularFrame& f) {
      return problem.dt * (f.dt / problem.frame.dt);
    };
    try {
      row.result = estimate(p);
      row.metrics.emplace(
          "train", evaluate_on_frame(row.result.params, eval_frames.train,
                                     step_for(eval_frames.train)));
      if (eval_frames.test) {
        row.metrics.emplace(
            "test", evaluate_on_frame(row.result.params, *eval_frames.test,
                                      step_for(*eval_frames.test)));
      }
      if (eval_frames.validation) {
        row.metrics.emplace(
            "validation",
            evaluate_on_frame(row.result.params, *eval_frames.validation,
                              step_for(*eval_frames.validation)));
      }
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.what();
    }
  });

  if (frame_digest(eval_frames.train) != train_digest ||
      (eval_frames.test && frame_digest(*eval_frames.test) != test_digest) ||
      (eval_frames.validation &&
       frame_digest(*eval_frames.validation) != val_digest)) {
    throw Error(ErrorKind::internal,
                "evaluation frames were modified during the sweep");
  }

  bool any_ok = false;
  for (const SweepRow& row : report.rows) any_ok = any_ok || !row.failed;
  if (!any_ok) {
    throw Error(ErrorKind::data, "every sweep row failed");
  }

  report.selected_sigma =
      select_optimum(report.rows, eval_frames.test.has_value());
  report.selection_rule =
      eval_frames.test.has_value() ? kSelectionRuleTest : kSelectionRuleTrain;
  return report;
}

}  // namespace hxid
