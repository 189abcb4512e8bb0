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

#include "estimate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "errors.hpp"
#include "integrate.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace hxid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Point = std::array<double, 4>;

Point clamp_to(const ParameterBounds& b, Point x) {
  for (int i = 0; i < 4; ++i) x[i] = std::clamp(x[i], b.lower[i], b.upper[i]);
  return x;
}

/// Streaming objective kernel; returns +inf as soon as the trajectory
/// leaves the finite range so hopeless candidates are cheap.
double objective_kernel(const Point& k, std::span<const InputVector> inputs,
                        const OutputTargets& targets, double dt) {
  const ParameterVector p = ParameterVector::from_array(k);
  ModelState x{targets.t_co[0], targets.t_ho[0]};
  double j = 0.0;
  const std::size_t n = inputs.size();
  for (std::size_t i = 0;;) {
    const double e_co = targets.t_co[i] - x.t_co;
    const double e_ho = targets.t_ho[i] - x.t_ho;
    j += e_co * e_co + e_ho * e_ho;
    if (++i >= n) break;
    x = detail::euler_step_unchecked(x, inputs[i - 1], p, dt);
    if (!(std::abs(x.t_co) + std::abs(x.t_ho) < 1e100)) return kInf;
  }
  return std::isfinite(j) ? j : kInf;
}

struct SimplexOutcome {
  Point x{};
  double f = kInf;
  long long evaluations = 0;
  bool converged = false;
};

/// Bounded Nelder-Mead with standard coefficients (reflection 1, expansion
/// 2, contraction 0.5, shrink 0.5). Every candidate is clamped into the box
/// before evaluation. `x0` must already be evaluated (one evaluation spent).
template <typename Objective, typename OnImproved>
SimplexOutcome nelder_mead(const Objective& obj, const ParameterBounds& bounds,
                           const Point& x0, double f0, int budget,
                           double j_rel_tol, double param_tol,
                           const OnImproved& on_improved) {
  SimplexOutcome out;
  out.x = x0;
  out.f = f0;
  out.evaluations = 1;

  const auto eval = [&](const Point& x, double& f) {
    if (out.evaluations >= budget) return false;
    ++out.evaluations;
    f = obj(x);
    return true;
  };
  const auto note_best = [&](const Point& x, double f) {
    if (f < out.f) {
      out.x = x;
      out.f = f;
      on_improved(out.evaluations, f);
    }
  };

  std::array<Point, 5> v;
  std::array<double, 5> fv;
  v[0] = x0;
  fv[0] = f0;
  for (int i = 0; i < 4; ++i) {
    Point p = x0;
    const double step = 0.05 * (bounds.upper[i] - bounds.lower[i]);
    if (step == 0.0) {
      v[i + 1] = p;
      fv[i + 1] = f0;
      continue;
    }
    p[i] = (p[i] + step <= bounds.upper[i]) ? p[i] + step : p[i] - step;
    v[i + 1] = clamp_to(bounds, p);
    if (!eval(v[i + 1], fv[i + 1])) return out;
    note_best(v[i + 1], fv[i + 1]);
  }

  std::array<int, 5> order{0, 1, 2, 3, 4};
  for (;;) {
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = order[0], second_worst = order[3], worst = order[4];

    const bool f_close =
        std::isfinite(fv[worst]) &&
        fv[worst] - fv[best] <= j_rel_tol * (std::abs(fv[best]) + j_rel_tol);
    double diameter = 0.0;
    for (int i = 1; i < 5; ++i) {
      for (int d = 0; d < 4; ++d) {
        diameter = std::max(diameter,
                            std::abs(v[order[i]][d] - v[best][d]));
      }
    }
    if (f_close && diameter <= param_tol) {
      out.converged = true;
      return out;
    }
    if (out.evaluations >= budget) return out;

    Point centroid{};
    for (int i = 0; i < 4; ++i) {
      for (int d = 0; d < 4; ++d) centroid[d] += v[order[i]][d];
    }
    for (int d = 0; d < 4; ++d) centroid[d] *= 0.25;

    const auto along = [&](double coef) {
      Point p;
      for (int d = 0; d < 4; ++d) {
        p[d] = centroid[d] + coef * (centroid[d] - v[worst][d]);
      }
      return clamp_to(bounds, p);
    };
    const auto replace_worst = [&](const Point& x, double f) {
      v[worst] = x;
      fv[worst] = f;
      note_best(x, f);
    };

    const Point xr = along(1.0);
    double fr;
    if (!eval(xr, fr)) return out;

    if (fr < fv[best]) {
      const Point xe = along(2.0);
      double fe;
      if (!eval(xe, fe)) {
        replace_worst(xr, fr);
        return out;
      }
      if (fe < fr) {
        replace_worst(xe, fe);
      } else {
        replace_worst(xr, fr);
      }
      continue;
    }
    if (fr < fv[second_worst]) {
      replace_worst(xr, fr);
      continue;
    }

    if (fr < fv[worst]) {
      const Point xc = along(0.5);  // outside contraction
      double fc;
      if (!eval(xc, fc)) {
        replace_worst(xr, fr);
        return out;
      }
      if (fc <= fr) {
        replace_worst(xc, fc);
        continue;
      }
    } else {
      const Point xc = along(-0.5);  // inside contraction
      double fc;
      if (!eval(xc, fc)) return out;
      if (fc < fv[worst]) {
        replace_worst(xc, fc);
        continue;
      }
    }

    // Shrink toward the best vertex.
    for (int i = 1; i < 5; ++i) {
      const int idx = order[i];
      Point p;
      for (int d = 0; d < 4; ++d) {
        p[d] = v[best][d] + 0.5 * (v[idx][d] - v[best][d]);
      }
      v[idx] = clamp_to(bounds, p);
      if (!eval(v[idx], fv[idx])) return out;
      note_best(v[idx], fv[idx]);
    }
  }
}

void validate_problem(const EstimationProblem& problem) {
  if (problem.frame.size() == 0) {
    throw Error(ErrorKind::argument, "training frame is empty");
  }
  if (!(problem.dt > 0.0) || !std::isfinite(problem.dt)) {
    throw Error(ErrorKind::argument, "integration step must be positive");
  }
  if (problem.budget < 1) {
    throw Error(ErrorKind::argument, "budget must be >= 1");
  }
  if (problem.n_starts < 1) {
    throw Error(ErrorKind::argument, "n_starts must be >= 1");
  }
  for (int i = 0; i < 4; ++i) {
    if (!(problem.bounds.lower[i] <= problem.bounds.upper[i])) {
      throw Error(ErrorKind::argument, "bounds are inverted");
    }
  }
  if (!problem.bounds.contains(problem.initial)) {
    throw Error(ErrorKind::argument, "bounds must contain the initial guess");
  }
  if (!(problem.noise.sigma >= 0.0)) {
    throw Error(ErrorKind::argument, "noise scale must be >= 0");
  }
}

/// Latin-hypercube style start points: one uniform sample per axis-aligned
/// stratum per parameter, strata randomly paired across parameters. Draw
/// order (per dimension: shuffle, then one uniform per stratum) is pinned
/// for reproducibility.
std::vector<Point> sample_starts(const ParameterBounds& bounds,
                                 std::size_t count, std::uint64_t seed) {
  std::vector<Point> starts(count);
  if (count == 0) return starts;
  RandomStream stream(seed);
  std::vector<std::size_t> perm(count);
  for (int d = 0; d < 4; ++d) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    stream.shuffle(perm.begin(), perm.end());
    const double width = bounds.upper[d] - bounds.lower[d];
    for (std::size_t j = 0; j < count; ++j) {
      const double stratum =
          (static_cast<double>(perm[j]) + stream.uniform()) /
          static_cast<double>(count);
      starts[j][d] = bounds.lower[d] + width * stratum;
    }
  }
  return starts;
}

}  // namespace

std::string sigma_label(double sigma) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", sigma);
  return buf;
}

std::uint64_t run_seed_for(std::uint64_t master_seed, double sigma) {
  return derive_stream_seed(master_seed, "sigma=" + sigma_label(sigma));
}

double objective_j(const ParameterVector& params, const RegularFrame& frame,
                   const OutputTargets& targets, double dt) {
  if (frame.size() == 0) {
    throw Error(ErrorKind::argument, "frame is empty");
  }
  if (targets.t_co.size() != frame.size() ||
      targets.t_ho.size() != frame.size()) {
    throw Error(ErrorKind::argument,
                "targets are not aligned with the frame");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorKind::argument, "integration step must be positive");
  }
  detail::require_finite_params(params);
  const std::vector<InputVector> inputs = frame.inputs();
  for (const InputVector& u : inputs) detail::require_valid_input(u);
  return objective_kernel(params.to_array(), inputs, targets, dt);
}

EstimationResult estimate(const EstimationProblem& problem,
                          const IterationSink& sink) {
  validate_problem(problem);

  const RegularFrame& frame = problem.frame;
  const std::vector<InputVector> inputs = frame.inputs();
  for (const InputVector& u : inputs) detail::require_valid_input(u);

  OutputTargets targets{
      {frame.col(Channel::t_co).begin(), frame.col(Channel::t_co).end()},
      {frame.col(Channel::t_ho).begin(), frame.col(Channel::t_ho).end()}};
  if (problem.noise.sigma > 0.0) {
    // One fixed realization per run keeps the objective deterministic for
    // the optimizer.
    targets = inject_noise(
        targets, {problem.noise.sigma,
                  derive_stream_seed(problem.noise.seed, "noise")});
  }

  std::vector<Point> starts;
  starts.reserve(static_cast<std::size_t>(problem.n_starts));
  starts.push_back(problem.initial.to_array());
  if (problem.n_starts > 1) {
    const auto extra = sample_starts(
        problem.bounds, static_cast<std::size_t>(problem.n_starts - 1),
        derive_stream_seed(problem.noise.seed, "starts"));
    starts.insert(starts.end(), extra.begin(), extra.end());
  }

  const auto objective = [&](const Point& x) {
    return objective_kernel(x, inputs, targets, problem.dt);
  };

  std::vector<StartRecord> records(starts.size());
  std::vector<Point> best_points(starts.size());
  std::vector<std::vector<std::pair<long long, double>>> logs(starts.size());

  parallel_for(starts.size(), problem.jobs, [&](std::size_t i) {
    StartRecord& rec = records[i];
    rec.index = static_cast<int>(i);
    const Point x0 = clamp_to(problem.bounds, starts[i]);
    rec.start = ParameterVector::from_array(x0);

    const double f0 = objective(x0);
    if (!std::isfinite(f0)) {
      rec.discarded = true;
      rec.evaluations = 1;
      return;
    }
    logs[i].emplace_back(1, f0);

    const auto outcome = nelder_mead(
        objective, problem.bounds, x0, f0, problem.budget,
        problem.j_rel_tol, problem.param_tol,
        [&](long long evals, double f) { logs[i].emplace_back(evals, f); });
    rec.final_j = outcome.f;
    rec.evaluations = outcome.evaluations;
    rec.converged = outcome.converged;
    best_points[i] = outcome.x;
  });

  if (sink) {
    for (std::size_t i = 0; i < logs.size(); ++i) {
      for (const auto& [evals, j] : logs[i]) {
        sink(static_cast<int>(i), evals, j);
      }
    }
  }

  int winner = -1;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].discarded) continue;
    if (winner < 0 || *records[i].final_j <
                          *records[static_cast<std::size_t>(winner)].final_j) {
      winner = static_cast<int>(i);
    }
  }
  if (winner < 0) {
    throw Error(ErrorKind::domain,
                "objective is non-finite at every start point");
  }

  EstimationResult result;
  const auto& win = records[static_cast<std::size_t>(winner)];
  result.params =
      ParameterVector::from_array(best_points[static_cast<std::size_t>(winner)]);
  result.objective = *win.final_j;
  result.converged = win.converged;
  result.per_start = records;
  result.evaluations = 0;
  for (const StartRecord& r : records) result.evaluations += r.evaluations;
  result.initial = problem.initial;
  result.sigma = problem.noise.sigma;
  result.seed = problem.noise.seed;
  return result;
}

}  // namespace hxid
