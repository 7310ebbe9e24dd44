//
// TomoLens - Copyright 2026 The TomoLens Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "tomolens/measurement.hpp"
#include "tomolens/statemodel.hpp"

namespace tomolens {

// Guard added to both p and 1 - p inside the logarithms.
inline constexpr double kLogGuard = 1e-10;

inline void check_records(int n_qubits, std::span<const MeasurementRecord> records) {
  for (const auto &r : records) {
    if (r.setting.n_qubits() != n_qubits)
      throw InvalidArgument("dimension_mismatch", "record for " + r.setting.str() +
                                                      " does not match " +
                                                      std::to_string(n_qubits) + " qubit(s)");
    if (r.shots < 0 || r.plus_count < 0 || r.plus_count > r.shots)
      throw InvalidArgument("malformed_record", "record for " + r.setting.str() +
                                                    " has inconsistent counts");
  }
}

/// Bernoulli log-likelihood of a single record at outcome probability p.
inline double record_log_likelihood(double p_plus, const MeasurementRecord &r) {
  const auto plus = static_cast<double>(r.plus_count);
  const auto minus = static_cast<double>(r.shots - r.plus_count);
  double ll = 0.0;
  if (plus > 0.0)
    ll += plus * std::log(p_plus + kLogGuard);
  if (minus > 0.0)
    ll += minus * std::log(1.0 - p_plus + kLogGuard);
  return ll;
}

/// Sum over records of n+ ln(p + eps) + (N - n+) ln(1 - p + eps), with p the
/// Born probability of +1 for each record's setting.
inline double log_likelihood(const PolarParams &params,
                             std::span<const MeasurementRecord> records) {
  check_records(params.n_qubits(), records);
  if (records.empty())
    return 0.0;
  // Polar form keeps Z-only likelihoods exactly independent of the phases.
  const PolarAmplitudes polar = polar_amplitudes(params);
  double total = 0.0;
  for (const auto &r : records)
    total += record_log_likelihood(outcome_prob_plus(polar, r.setting), r);
  return total;
}

inline double negative_log_likelihood(const PolarParams &params,
                                      std::span<const MeasurementRecord> records) {
  return -log_likelihood(params, records);
}

} // namespace tomolens
