//
// TomoLens - Copyright 2026 The TomoLens Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tomolens/estimator.hpp"
#include "tomolens/measurement.hpp"
#include "tomolens/statemodel.hpp"

namespace tomolens {

inline constexpr const char *kWarnPhiUnconstrained = "phi unconstrained";
inline constexpr const char *kWarnPhiSignAmbiguous = "phi sign ambiguous";

/// Shots per measurement setting, ordered like enumerate_settings().
using ShotPlan = std::map<PauliString, std::int64_t>;

struct ExperimentSpec {
  int n_qubits = 1;
  PolarParams true_params = PolarParams::single(0.0, 0.0);
  ShotPlan shot_plan;
  std::uint64_t seed = 0;
  OptimizerConfig optimizer;

  void validate() const {
    if (true_params.n_qubits() != n_qubits)
      throw InvalidArgument("dimension_mismatch", "true_params do not match n_qubits");
    if (shot_plan.empty())
      throw InvalidArgument("invalid_shot_plan", "shot plan has no settings");
    std::int64_t total = 0;
    for (const auto &[setting, shots] : shot_plan) {
      if (setting.n_qubits() != n_qubits)
        throw InvalidArgument("invalid_setting", "setting " + setting.str() + " does not act on " +
                                                     std::to_string(n_qubits) + " qubit(s)");
      if (shots < 0)
        throw InvalidArgument("invalid_shot_count",
                              "setting " + setting.str() + " has a negative shot count");
      total += shots;
    }
    if (total <= 0)
      throw ComputationError("no_shots", "every setting in the shot plan has zero shots");
    optimizer.validate();
  }
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<MeasurementRecord> records;
  TomographyResult result;
  PureState true_state;
  std::vector<BlochVector> per_qubit_bloch_true;
  std::vector<BlochVector> per_qubit_bloch_estimated;
  double fidelity = 0.0;
  std::vector<std::string> warnings;
};

inline ShotPlan default_shot_plan(int n_qubits, std::int64_t shots_per_setting) {
  if (shots_per_setting < 0)
    throw InvalidArgument("invalid_shot_count", "shots_per_setting must be non-negative");
  ShotPlan plan;
  for (auto &s : enumerate_settings(n_qubits))
    plan.emplace(std::move(s), shots_per_setting);
  return plan;
}

inline std::int64_t total_shots(const ShotPlan &plan) {
  std::int64_t total = 0;
  for (const auto &[_, shots] : plan)
    total += shots;
  return total;
}

/// Flags single-qubit plans that cannot pin down phi. Missing settings
/// count as zero shots.
inline std::vector<std::string> plan_warnings(int n_qubits, const ShotPlan &plan) {
  std::vector<std::string> out;
  if (n_qubits != 1)
    return out;
  auto shots_for = [&](const char *label) {
    const auto it = plan.find(PauliString::parse(label));
    return it == plan.end() ? std::int64_t{0} : it->second;
  };
  const bool has_x = shots_for("X") > 0;
  const bool has_y = shots_for("Y") > 0;
  if (!has_x && !has_y)
    out.emplace_back(kWarnPhiUnconstrained);
  else if (!has_y)
    out.emplace_back(kWarnPhiSignAmbiguous);
  return out;
}

/// Prepare, simulate, estimate, evaluate. Counts for each setting come from
/// the stream keyed by (spec.seed, setting index); restarts use
/// spec.optimizer.seed.
inline ExperimentReport run_experiment(const ExperimentSpec &spec) {
  spec.validate();
  const PolarAmplitudes polar = polar_amplitudes(spec.true_params);
  PureState true_state = params_to_state(spec.true_params);

  std::vector<MeasurementRecord> records;
  records.reserve(spec.shot_plan.size());
  for (const auto &[setting, shots] : spec.shot_plan)
    records.push_back(simulate_setting(polar, setting, shots, spec.seed));

  TomographyResult result = estimate_mle(records, spec.n_qubits, spec.optimizer, true_state);
  const double fid = fidelity(true_state, result.estimated_state);
  auto bloch_true = per_qubit_bloch(true_state);
  auto bloch_est = per_qubit_bloch(result.estimated_state);
  auto warnings = plan_warnings(spec.n_qubits, spec.shot_plan);
  return ExperimentReport{spec,
                          std::move(records),
                          std::move(result),
                          std::move(true_state),
                          std::move(bloch_true),
                          std::move(bloch_est),
                          fid,
                          std::move(warnings)};
}

} // namespace tomolens
