//
// TomoLens - Copyright 2026 The TomoLens Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "tomolens/common.hpp"

namespace tomolens {

struct OptimizerConfig {
  int restarts = 8;
  int max_iterations = 500;
  double gradient_step = 1e-6;
  double convergence_tol = 1e-9;
  std::uint64_t seed = 0;

  void validate() const {
    if (restarts < 1)
      throw InvalidArgument("invalid_optimizer_config", "restarts must be >= 1");
    if (max_iterations < 1)
      throw InvalidArgument("invalid_optimizer_config", "max_iterations must be >= 1");
    if (!(gradient_step > 0.0))
      throw InvalidArgument("invalid_optimizer_config", "gradient_step must be > 0");
    if (!(convergence_tol > 0.0))
      throw InvalidArgument("invalid_optimizer_config", "convergence_tol must be > 0");
  }
};

struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const noexcept { return lower.size(); }

  bool contains(std::span<const double> x) const {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!(x[i] >= lower[i] && x[i] <= upper[i]))
        return false;
    return true;
  }

  void project(std::span<double> x) const {
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = std::clamp(x[i], lower[i], upper[i]);
  }
};

using Objective = std::function<double(std::span<const double>)>;

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  bool converged = false;
  bool aborted = false; // objective turned non-finite
  int iterations = 0;
  int evaluations = 0;
};

/// Central differences with step h; one-sided differences for coordinates
/// where x +- h would leave the box. `fx` is f(x), reused by the one-sided
/// formulas.
inline std::vector<double> finite_difference_gradient(const Objective &f, std::span<const double> x,
                                                      double fx, const Bounds &bounds, double h) {
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    const bool room_below = xi - h >= bounds.lower[i];
    const bool room_above = xi + h <= bounds.upper[i];
    if (room_below && room_above) {
      probe[i] = xi + h;
      const double up = f(probe);
      probe[i] = xi - h;
      const double down = f(probe);
      g[i] = (up - down) / (2.0 * h);
    } else if (room_above) {
      probe[i] = xi + h;
      g[i] = (f(probe) - fx) / h;
    } else {
      probe[i] = xi - h;
      g[i] = (fx - f(probe)) / h;
    }
    probe[i] = xi;
  }
  return g;
}

/// Zeroes gradient components that point out of the box at active bounds.
inline std::vector<double> projected_gradient(std::span<const double> x, std::span<const double> g,
                                              const Bounds &bounds) {
  std::vector<double> pg(g.begin(), g.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if ((x[i] <= bounds.lower[i] && g[i] > 0.0) || (x[i] >= bounds.upper[i] && g[i] < 0.0))
      pg[i] = 0.0;
  }
  return pg;
}

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a)
    m = std::max(m, std::abs(v));
  return m;
}

inline bool all_finite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

struct CorrectionPair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

// L-BFGS two-loop recursion restricted to the free coordinates.
inline std::vector<double> lbfgs_direction(std::span<const double> pg,
                                           const std::deque<CorrectionPair> &memory,
                                           const std::vector<bool> &free) {
  const std::size_t n = pg.size();
  std::vector<double> q(pg.begin(), pg.end());
  auto masked_dot = [&](const std::vector<double> &a, const std::vector<double> &b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (free[i])
        acc += a[i] * b[i];
    return acc;
  };
  std::vector<double> alpha(memory.size());
  for (std::size_t k = memory.size(); k-- > 0;) {
    const auto &m = memory[k];
    alpha[k] = m.rho * masked_dot(m.s, q);
    for (std::size_t i = 0; i < n; ++i)
      if (free[i])
        q[i] -= alpha[k] * m.y[i];
  }
  if (!memory.empty()) {
    const auto &last = memory.back();
    const double yy = masked_dot(last.y, last.y);
    const double sy = masked_dot(last.s, last.y);
    if (yy > 0.0 && sy > 0.0)
      for (double &v : q)
        v *= sy / yy;
  }
  for (std::size_t k = 0; k < memory.size(); ++k) {
    const auto &m = memory[k];
    const double beta = m.rho * masked_dot(m.y, q);
    for (std::size_t i = 0; i < n; ++i)
      if (free[i])
        q[i] += (alpha[k] - beta) * m.s[i];
  }
  for (std::size_t i = 0; i < n; ++i)
    q[i] = free[i] ? -q[i] : 0.0;
  return q;
}

inline bool objective_converged(double before, double after, double tol) {
  return before - after <= tol * std::max({1.0, std::abs(before), std::abs(after)});
}

} // namespace detail

/// Coordinate-wise golden-section search. Each sweep minimizes along every
/// coordinate over a window around the current point that halves per sweep;
/// moves are accepted only when they lower the objective.
inline MinimizeResult golden_section_polish(const Objective &f, const Bounds &bounds,
                                            std::vector<double> x, double fx,
                                            const OptimizerConfig &config, int max_sweeps = 40) {
  constexpr double kInvPhi = 0.6180339887498949;
  MinimizeResult out;
  out.x = std::move(x);
  out.value = fx;
  double radius = 0.0;
  for (std::size_t i = 0; i < bounds.size(); ++i)
    radius = std::max(radius, 0.25 * (bounds.upper[i] - bounds.lower[i]));

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double start_value = out.value;
    for (std::size_t i = 0; i < out.x.size(); ++i) {
      double a = std::max(bounds.lower[i], out.x[i] - radius);
      double b = std::min(bounds.upper[i], out.x[i] + radius);
      std::vector<double> probe = out.x;
      auto eval = [&](double v) {
        probe[i] = v;
        ++out.evaluations;
        return f(probe);
      };
      double c = b - kInvPhi * (b - a);
      double d = a + kInvPhi * (b - a);
      double fc = eval(c), fd = eval(d);
      for (int it = 0; it < 60 && (b - a) > 1e-10; ++it) {
        if (fc < fd) {
          b = d; d = c; fd = fc;
          c = b - kInvPhi * (b - a);
          fc = eval(c);
        } else {
          a = c; c = d; fc = fd;
          d = a + kInvPhi * (b - a);
          fd = eval(d);
        }
      }
      const double best_v = fc < fd ? c : d;
      const double best_f = std::min(fc, fd);
      if (!std::isfinite(best_f)) {
        out.aborted = true;
        return out;
      }
      if (best_f < out.value) {
        out.x[i] = best_v;
        out.value = best_f;
      }
    }
    ++out.iterations;
    radius *= 0.5;
    if (radius < 1e-8 || detail::objective_converged(start_value, out.value, config.convergence_tol)) {
      out.converged = true;
      break;
    }
  }
  return out;
}

/// Projected limited-memory BFGS on a box with finite-difference gradients.
///
/// Accepted objective values never increase. Stops when the relative
/// objective decrease of a step drops below `convergence_tol`, when the
/// projected gradient vanishes, or when `max_iterations` is reached. If the
/// quasi-Newton pass does not converge, a golden-section polish continues
/// from its best point.
inline MinimizeResult bounded_minimize(const Objective &f, const Bounds &bounds,
                                       std::vector<double> start, const OptimizerConfig &config) {
  constexpr std::size_t kMemory = 10;
  constexpr double kArmijo = 1e-4;
  constexpr double kProjGradTol = 1e-10;

  if (start.size() != bounds.size())
    throw InvalidArgument("dimension_mismatch", "start point and bounds differ in length");
  if (!bounds.contains(start))
    throw InvalidArgument("invalid_start", "start point lies outside the bounds");

  int evaluations = 0;
  const Objective counted = [&](std::span<const double> v) {
    ++evaluations;
    return f(v);
  };

  MinimizeResult out;
  out.x = std::move(start);
  out.value = counted(out.x);
  if (!std::isfinite(out.value))
    throw ComputationError("non_finite_objective", "objective is not finite at the start point");

  const std::size_t n = out.x.size();
  std::deque<detail::CorrectionPair> memory;
  std::vector<double> g = finite_difference_gradient(counted, out.x, out.value, bounds,
                                                     config.gradient_step);
  bool converged = false;

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    out.iterations = iter + 1;
    if (!detail::all_finite(g)) {
      out.aborted = true;
      break;
    }
    const std::vector<double> pg = projected_gradient(out.x, g, bounds);
    if (detail::max_abs(pg) <= kProjGradTol) {
      converged = true;
      break;
    }

    std::vector<bool> free(n);
    for (std::size_t i = 0; i < n; ++i)
      free[i] = pg[i] != 0.0 || (out.x[i] > bounds.lower[i] && out.x[i] < bounds.upper[i]);

    bool accepted = false;
    std::vector<double> trial(n);
    double f_trial = out.value;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      std::vector<double> d = memory.empty() ? std::vector<double>(pg.size())
                                             : detail::lbfgs_direction(pg, memory, free);
      if (memory.empty() || detail::dot(d, pg) >= 0.0) {
        memory.clear();
        for (std::size_t i = 0; i < n; ++i)
          d[i] = -pg[i];
      }
      // Unit step for quasi-Newton directions; a bounded first step for plain
      // steepest descent whose scale is unknown.
      double step = memory.empty() ? std::min(1.0, 1.0 / detail::max_abs(d)) : 1.0;
      for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
        for (std::size_t i = 0; i < n; ++i)
          trial[i] = out.x[i] + step * d[i];
        bounds.project(trial);
        double decrease = 0.0;
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
          decrease += g[i] * (trial[i] - out.x[i]);
          moved = moved || trial[i] != out.x[i];
        }
        if (!moved)
          break;
        f_trial = counted(trial);
        if (!std::isfinite(f_trial))
          continue;
        if (f_trial <= out.value + kArmijo * decrease && f_trial <= out.value) {
          accepted = true;
          break;
        }
      }
      if (!accepted)
        memory.clear();
    }
    if (!accepted)
      break; // no descent possible at finite-difference resolution

    std::vector<double> g_new =
        finite_difference_gradient(counted, trial, f_trial, bounds, config.gradient_step);
    detail::CorrectionPair pair{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      pair.s[i] = trial[i] - out.x[i];
      pair.y[i] = g_new[i] - g[i];
    }
    const double sy = detail::dot(pair.s, pair.y);
    if (sy > 1e-12 * detail::dot(pair.y, pair.y) && sy > 0.0) {
      pair.rho = 1.0 / sy;
      memory.push_back(std::move(pair));
      if (memory.size() > kMemory)
        memory.pop_front();
    }

    const double previous = out.value;
    out.x = trial;
    out.value = f_trial;
    g = std::move(g_new);
    if (detail::objective_converged(previous, out.value, config.convergence_tol)) {
      converged = true;
      break;
    }
  }

  out.evaluations = evaluations;
  if (out.aborted)
    return out;
  out.converged = converged;
  if (!converged) {
    MinimizeResult polished =
        golden_section_polish(f, bounds, out.x, out.value, config);
    polished.iterations += out.iterations;
    polished.evaluations += out.evaluations;
    return polished;
  }
  return out;
}

} // namespace tomolens
