//
// TomoLens - Copyright 2026 The TomoLens Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "tomolens/likelihood.hpp"
#include "tomolens/optimize.hpp"
#include "tomolens/random.hpp"
#include "tomolens/statemodel.hpp"

namespace tomolens {

// Upper box bound used for phases; the half-open [0, 2pi) has no closed form.
inline constexpr double kPhaseUpperBound = kTwoPi - 1e-12;

// Restarts whose objective differs by less than this are considered tied.
inline constexpr double kRestartTieTolerance = 1e-12;

struct TomographyResult {
  PolarParams estimated_params;
  PureState estimated_state;
  std::optional<double> fidelity_to_truth;
  double final_log_likelihood = 0.0;
  int restarts_run = 0;
  int best_restart_index = 0;
  bool converged = false;
  std::vector<double> restart_log_likelihoods;
};

inline Bounds polar_bounds(int n_qubits) {
  const std::size_t c = PolarParams::count_for(n_qubits);
  Bounds b;
  b.lower.assign(2 * c, 0.0);
  b.upper.assign(2 * c, kPi);
  std::fill(b.upper.begin() + static_cast<std::ptrdiff_t>(c), b.upper.end(), kPhaseUpperBound);
  return b;
}

/// Uniform random start: thetas in [0, pi], phis in [0, 2pi).
inline std::vector<double> random_start(int n_qubits, Rng &rng) {
  const std::size_t c = PolarParams::count_for(n_qubits);
  std::uniform_real_distribution<double> theta_dist(0.0, kPi);
  std::uniform_real_distribution<double> phi_dist(0.0, kTwoPi);
  std::vector<double> x(2 * c);
  for (std::size_t i = 0; i < c; ++i)
    x[i] = theta_dist(rng);
  for (std::size_t i = 0; i < c; ++i)
    x[c + i] = std::min(phi_dist(rng), kPhaseUpperBound);
  return x;
}

namespace detail {

// A phase pinned at 0 (or at the upper bound) with the gradient pushing it
// outward sits next to its periodic image; move it across so the descent can
// continue. Returns false when no phase needed moving.
inline bool wrap_pinned_phases(std::vector<double> &x, std::span<const double> g, std::size_t c) {
  bool moved = false;
  for (std::size_t i = c; i < 2 * c; ++i) {
    if (x[i] <= 0.0 && g[i] > 0.0) {
      x[i] = kPhaseUpperBound;
      moved = true;
    } else if (x[i] >= kPhaseUpperBound && g[i] < 0.0) {
      x[i] = 0.0;
      moved = true;
    }
  }
  return moved;
}

} // namespace detail

/// Maximum-likelihood estimate of a pure state from outcome counts.
///
/// Runs `config.restarts` bounded descents of the negative log-likelihood
/// from uniform random starts and keeps the restart with the highest final
/// log-likelihood (ties go to the lowest restart index). The result depends
/// only on the records and the config, seed included.
inline TomographyResult estimate_mle(std::span<const MeasurementRecord> records, int n_qubits,
                                     const OptimizerConfig &config,
                                     const std::optional<PureState> &true_state = std::nullopt) {
  config.validate();
  if (n_qubits < 1 || n_qubits > kMaxDenseQubits)
    throw InvalidArgument("unsupported_qubit_count", "n_qubits out of range");
  check_records(n_qubits, records);
  std::int64_t total_shots = 0;
  for (const auto &r : records)
    total_shots += r.shots;
  if (total_shots <= 0)
    throw ComputationError("no_information", "no record carries any shots");
  if (true_state && true_state->n_qubits() != n_qubits)
    throw InvalidArgument("dimension_mismatch", "true state does not match n_qubits");

  const std::size_t c = PolarParams::count_for(n_qubits);
  const Bounds bounds = polar_bounds(n_qubits);
  const Objective nll = [&](std::span<const double> x) {
    return negative_log_likelihood(PolarParams::from_flat(n_qubits, x), records);
  };

  constexpr int kMaxPhaseWraps = 4;
  std::vector<double> per_restart(static_cast<std::size_t>(config.restarts),
                                  -std::numeric_limits<double>::infinity());
  std::optional<std::size_t> best;
  std::vector<double> best_x;
  double best_value = std::numeric_limits<double>::infinity();
  bool best_converged = false;

  for (int r = 0; r < config.restarts; ++r) {
    Rng rng = make_stream(config.seed, StreamDomain::kRestarts, static_cast<std::uint64_t>(r));
    MinimizeResult run = bounded_minimize(nll, bounds, random_start(n_qubits, rng), config);
    for (int wrap = 0; wrap < kMaxPhaseWraps && !run.aborted; ++wrap) {
      const auto g = finite_difference_gradient(nll, run.x, run.value, bounds, config.gradient_step);
      std::vector<double> moved = run.x;
      if (!detail::wrap_pinned_phases(moved, g, c))
        break;
      MinimizeResult next = bounded_minimize(nll, bounds, std::move(moved), config);
      if (next.aborted || next.value >= run.value)
        break;
      run = std::move(next);
    }
    if (run.aborted || !std::isfinite(run.value))
      continue;
    per_restart[static_cast<std::size_t>(r)] = -run.value;
    if (!best || run.value < best_value - kRestartTieTolerance) {
      best = static_cast<std::size_t>(r);
      best_value = run.value;
      best_x = run.x;
      best_converged = run.converged;
    }
  }
  if (!best)
    throw ComputationError("non_finite_objective",
                           "every restart hit a non-finite objective; the records look corrupt");

  PolarParams params = PolarParams::from_flat(n_qubits, best_x);
  PureState state = params_to_state(params);
  std::optional<double> fid;
  if (true_state)
    fid = fidelity(*true_state, state);
  const double ll = log_likelihood(params, records);
  return TomographyResult{std::move(params), std::move(state), fid, ll, config.restarts,
                          static_cast<int>(*best), best_converged, std::move(per_restart)};
}

} // namespace tomolens
