//
// TomoLens - Copyright 2026 The TomoLens Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

// JSON forms of the experiment types. Field names are lower_snake_case,
// complex numbers are [re, im] pairs, angles are radians and Pauli strings
// are uppercase letter strings such as "XZ". The documented schema lives in
// schemas/v1/experiment_report.schema.json.

#include <string>

#include "json.hpp"

#include "tomolens/experiment.hpp"

namespace tomolens {

using Json = nlohmann::ordered_json;

inline Json to_json(const PolarParams &p) {
  return Json{{"n_qubits", p.n_qubits()}, {"thetas", p.thetas()}, {"phis", p.phis()}};
}

inline Json to_json(const PureState &s) {
  Json amps = Json::array();
  for (std::size_t k = 0; k < s.dimension(); ++k)
    amps.push_back(Json::array({s[k].real(), s[k].imag()}));
  return amps;
}

inline Json to_json(const BlochVector &b) { return Json{{"x", b.x}, {"y", b.y}, {"z", b.z}}; }

inline Json to_json(const OptimizerConfig &c) {
  return Json{{"restarts", c.restarts},
              {"max_iterations", c.max_iterations},
              {"gradient_step", c.gradient_step},
              {"convergence_tol", c.convergence_tol},
              {"seed", c.seed}};
}

inline Json to_json(const ShotPlan &plan) {
  Json out = Json::object();
  for (const auto &[setting, shots] : plan)
    out[setting.str()] = shots;
  return out;
}

inline Json to_json(const ExperimentSpec &s) {
  return Json{{"n_qubits", s.n_qubits},
              {"true_params", to_json(s.true_params)},
              {"shot_plan", to_json(s.shot_plan)},
              {"seed", s.seed},
              {"optimizer", to_json(s.optimizer)}};
}

inline Json to_json(const MeasurementRecord &r) {
  return Json{{"setting", r.setting.str()}, {"shots", r.shots}, {"plus_count", r.plus_count}};
}

inline Json to_json(const TomographyResult &r) {
  Json restarts = Json::array();
  for (double v : r.restart_log_likelihoods)
    restarts.push_back(std::isfinite(v) ? Json(v) : Json(nullptr));
  return Json{{"estimated_params", to_json(r.estimated_params)},
              {"estimated_state", to_json(r.estimated_state)},
              {"fidelity_to_truth", r.fidelity_to_truth ? Json(*r.fidelity_to_truth) : Json(nullptr)},
              {"final_log_likelihood", r.final_log_likelihood},
              {"restarts_run", r.restarts_run},
              {"best_restart_index", r.best_restart_index},
              {"converged", r.converged},
              {"restart_log_likelihoods", std::move(restarts)}};
}

inline Json to_json(const ExperimentReport &rep) {
  Json records = Json::array();
  for (const auto &r : rep.records)
    records.push_back(to_json(r));
  Json bloch_true = Json::array(), bloch_est = Json::array();
  for (const auto &b : rep.per_qubit_bloch_true)
    bloch_true.push_back(to_json(b));
  for (const auto &b : rep.per_qubit_bloch_estimated)
    bloch_est.push_back(to_json(b));
  return Json{{"spec", to_json(rep.spec)},
              {"records", std::move(records)},
              {"result", to_json(rep.result)},
              {"true_state", to_json(rep.true_state)},
              {"per_qubit_bloch_true", std::move(bloch_true)},
              {"per_qubit_bloch_estimated", std::move(bloch_est)},
              {"fidelity", rep.fidelity},
              {"warnings", rep.warnings}};
}

/// Canonical text form of a report; the CLI and the service both emit this.
inline std::string dump_report(const ExperimentReport &rep) { return to_json(rep).dump(2); }

/// Parses a "records" array as produced by to_json(ExperimentReport).
inline std::vector<MeasurementRecord> records_from_json(const Json &j) {
  std::vector<MeasurementRecord> out;
  for (const auto &r : j)
    out.emplace_back(PauliString::parse(r.at("setting").get<std::string>()),
                     r.at("shots").get<std::int64_t>(), r.at("plus_count").get<std::int64_t>());
  return out;
}

} // namespace tomolens
