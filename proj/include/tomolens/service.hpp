//
// TomoLens - Copyright 2026 The TomoLens Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

// Request validation and response assembly for the HTTP API, independent of
// any transport. http_server.hpp binds these to routes.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

#include "tomolens/serialization.hpp"

namespace tomolens {

inline constexpr const char *kVersion = "1.0.0";
inline constexpr int kServiceMaxQubits = 3;
inline constexpr std::int64_t kMaxShotsPerSetting = 1'000'000'000;

enum class AngleUnit { kDegrees, kRadians };

inline AngleUnit parse_angle_unit(std::string_view s) {
  if (s == "deg" || s == "degrees")
    return AngleUnit::kDegrees;
  if (s == "rad" || s == "radians")
    return AngleUnit::kRadians;
  throw InvalidArgument("invalid_angle_unit",
                        "angle unit must be \"deg\" or \"rad\", got \"" + std::string(s) + "\"");
}

inline const char *angle_unit_name(AngleUnit u) { return u == AngleUnit::kDegrees ? "deg" : "rad"; }

/// Converts user-facing thetas/phis to radian PolarParams. Range checks run
/// in the caller's unit so that 180 deg maps to exactly pi.
inline PolarParams params_from_user_angles(int n_qubits, const std::vector<double> &thetas,
                                           const std::vector<double> &phis, AngleUnit unit) {
  const std::size_t c = PolarParams::count_for(n_qubits);
  if (thetas.size() != c || phis.size() != c)
    throw InvalidArgument("dimension_mismatch",
                          std::to_string(n_qubits) + " qubit(s) need " + std::to_string(c) +
                              " theta and " + std::to_string(c) + " phi values");
  const double half_turn = unit == AngleUnit::kDegrees ? 180.0 : kPi;
  const double full_turn = unit == AngleUnit::kDegrees ? 360.0 : kTwoPi;
  std::vector<double> t(c), p(c);
  for (std::size_t i = 0; i < c; ++i) {
    if (!(thetas[i] >= 0.0 && thetas[i] <= half_turn))
      throw InvalidArgument("invalid_parameter", "theta values must lie in [0, " +
                                                     std::string(unit == AngleUnit::kDegrees ? "180" : "pi") +
                                                     "]");
    if (!(phis[i] >= 0.0 && phis[i] < full_turn))
      throw InvalidArgument("invalid_parameter", "phi values must lie in [0, " +
                                                     std::string(unit == AngleUnit::kDegrees ? "360" : "2pi") +
                                                     ")");
    const double tr = unit == AngleUnit::kDegrees ? deg_to_rad(thetas[i]) : thetas[i];
    const double pr = unit == AngleUnit::kDegrees ? deg_to_rad(phis[i]) : phis[i];
    t[i] = std::clamp(tr, 0.0, kPi);
    p[i] = std::min(pr, std::nextafter(kTwoPi, 0.0));
  }
  return PolarParams(n_qubits, std::move(t), std::move(p));
}

inline double to_user_angle(double rad, AngleUnit unit) {
  return unit == AngleUnit::kDegrees ? rad_to_deg(rad) : rad;
}

/// Validated body of POST /api/v1/tomography/run.
struct RunRequest {
  ExperimentSpec spec;
  AngleUnit unit = AngleUnit::kDegrees;
};

namespace detail {

inline const Json &require(const Json &body, const char *key) {
  if (!body.contains(key))
    throw InvalidArgument("missing_field", std::string("missing required field \"") + key + "\"");
  return body.at(key);
}

inline std::vector<double> number_list(const Json &j, const char *key) {
  if (!j.is_array())
    throw InvalidArgument("invalid_field", std::string("\"") + key + "\" must be an array of numbers");
  std::vector<double> out;
  for (const auto &v : j) {
    if (!v.is_number())
      throw InvalidArgument("invalid_field", std::string("\"") + key + "\" must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline std::int64_t shot_count(const Json &v) {
  if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)
    throw InvalidArgument("invalid_shot_count", "shot counts must be non-negative");
  if (v.is_number_float() && v.get<double>() < 0.0)
    throw InvalidArgument("invalid_shot_count", "shot counts must be non-negative");
  if (!v.is_number_integer())
    throw InvalidArgument("invalid_shot_count", "shot counts must be integers");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(kMaxShotsPerSetting))
    throw InvalidArgument("invalid_shot_count", "shot count exceeds the per-setting limit");
  return v.get<std::int64_t>();
}

inline int small_positive_int(const Json &v, const char *key, int max_value) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1 || v.get<std::int64_t>() > max_value)
    throw InvalidArgument("invalid_optimizer_config", std::string("\"") + key +
                                                          "\" must be an integer in [1, " +
                                                          std::to_string(max_value) + "]");
  return v.get<int>();
}

} // namespace detail

/// Builds a shot plan from a per-setting count, an "Nx,Ny,Nz" triple (one
/// qubit only) or an explicit map, optionally restricted to `settings`.
inline ShotPlan shot_plan_from_json(int n_qubits, const Json &shots, const Json *settings) {
  std::vector<PauliString> selected;
  if (settings) {
    if (!settings->is_array() || settings->empty())
      throw InvalidArgument("invalid_setting", "\"settings\" must be a non-empty array of strings");
    for (const auto &s : *settings) {
      if (!s.is_string())
        throw InvalidArgument("invalid_setting", "\"settings\" entries must be strings");
      PauliString p = PauliString::parse(s.get<std::string>());
      if (p.n_qubits() != n_qubits)
        throw InvalidArgument("invalid_setting", "setting " + p.str() + " does not act on " +
                                                     std::to_string(n_qubits) + " qubit(s)");
      selected.push_back(std::move(p));
    }
  } else {
    selected = enumerate_settings(n_qubits);
  }
  auto is_selected = [&](const PauliString &p) {
    return std::find(selected.begin(), selected.end(), p) != selected.end();
  };

  ShotPlan plan;
  if (shots.is_number()) {
    const std::int64_t n = detail::shot_count(shots);
    for (const auto &p : selected)
      plan[p] = n;
  } else if (shots.is_array()) {
    if (n_qubits != 1 || shots.size() != 3)
      throw InvalidArgument("invalid_shot_count",
                            "a shot list is only accepted for one qubit as [Nx, Ny, Nz]");
    const char *labels[] = {"X", "Y", "Z"};
    for (std::size_t i = 0; i < 3; ++i) {
      PauliString p = PauliString::parse(labels[i]);
      const std::int64_t n = detail::shot_count(shots[i]);
      if (is_selected(p))
        plan[p] = n;
    }
  } else if (shots.is_object()) {
    for (const auto &[key, value] : shots.items()) {
      PauliString p = PauliString::parse(key);
      if (p.n_qubits() != n_qubits)
        throw InvalidArgument("invalid_setting", "setting " + p.str() + " does not act on " +
                                                     std::to_string(n_qubits) + " qubit(s)");
      const std::int64_t n = detail::shot_count(value);
      if (is_selected(p))
        plan[p] = n;
    }
  } else {
    throw InvalidArgument("invalid_shot_count",
                          "\"shots\" must be an integer, an [Nx, Ny, Nz] list or a map");
  }
  if (plan.empty())
    throw InvalidArgument("invalid_setting", "no measurement setting selected");
  return plan;
}

/// Validates a request body. Throws InvalidArgument for 400-class problems
/// and ComputationError("no_shots") when every selected setting has zero
/// shots. The CLI reuses this with a larger qubit cap.
inline RunRequest parse_run_request(const Json &body, int max_qubits = kServiceMaxQubits) {
  if (!body.is_object())
    throw InvalidArgument("malformed_request", "request body must be a JSON object");
  RunRequest req;
  req.unit = parse_angle_unit(detail::require(body, "angle_unit").is_string()
                                  ? body.at("angle_unit").get<std::string>()
                                  : std::string("<non-string>"));

  int n = 1;
  if (body.contains("n_qubits")) {
    const auto &v = body.at("n_qubits");
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1 ||
        v.get<std::int64_t>() > max_qubits)
      throw InvalidArgument("unsupported_qubit_count",
                            "n_qubits must be an integer in [1, " + std::to_string(max_qubits) +
                                "]");
    n = v.get<int>();
  }
  req.spec.n_qubits = n;
  req.spec.true_params =
      params_from_user_angles(n, detail::number_list(detail::require(body, "thetas"), "thetas"),
                              detail::number_list(detail::require(body, "phis"), "phis"), req.unit);
  req.spec.shot_plan = shot_plan_from_json(
      n, detail::require(body, "shots"), body.contains("settings") ? &body.at("settings") : nullptr);

  if (body.contains("seed")) {
    const auto &v = body.at("seed");
    if (!v.is_number_unsigned())
      throw InvalidArgument("invalid_seed", "\"seed\" must be an integer in [0, 2^64)");
    req.spec.seed = v.get<std::uint64_t>();
  }
  req.spec.optimizer.seed = req.spec.seed;
  if (body.contains("restarts"))
    req.spec.optimizer.restarts = detail::small_positive_int(body.at("restarts"), "restarts", 64);
  if (body.contains("max_iterations"))
    req.spec.optimizer.max_iterations =
        detail::small_positive_int(body.at("max_iterations"), "max_iterations", 100000);

  req.spec.validate();
  return req;
}

/// The "display" block: per-qubit Cartesian Bloch triples, parameter bar
/// data in the request's unit, and the fidelity.
inline Json display_json(const ExperimentReport &rep, AngleUnit unit) {
  auto triples = [](const std::vector<BlochVector> &v) {
    Json out = Json::array();
    for (const auto &b : v)
      out.push_back(Json::array({b.x, b.y, b.z}));
    return out;
  };
  Json labels = Json::array(), truth = Json::array(), est = Json::array();
  const auto &tp = rep.spec.true_params;
  const auto &ep = rep.result.estimated_params;
  for (std::size_t i = 0; i < tp.count(); ++i) {
    labels.push_back("theta_" + std::to_string(i + 1));
    truth.push_back(to_user_angle(tp.thetas()[i], unit));
    est.push_back(to_user_angle(ep.thetas()[i], unit));
  }
  for (std::size_t i = 0; i < tp.count(); ++i) {
    labels.push_back("phi_" + std::to_string(i + 1));
    truth.push_back(to_user_angle(tp.phis()[i], unit));
    est.push_back(to_user_angle(ep.phis()[i], unit));
  }
  return Json{{"angle_unit", angle_unit_name(unit)},
              {"bloch_true", triples(rep.per_qubit_bloch_true)},
              {"bloch_estimated", triples(rep.per_qubit_bloch_estimated)},
              {"parameter_bars", Json{{"labels", labels}, {"true", truth}, {"estimated", est}}},
              {"fidelity", rep.fidelity}};
}

inline Json run_response_json(const ExperimentReport &rep, AngleUnit unit, double elapsed_ms) {
  return Json{{"report", to_json(rep)},
              {"display", display_json(rep, unit)},
              {"warnings", rep.warnings},
              {"elapsed_ms", elapsed_ms}};
}

struct HttpReply {
  int status = 200;
  Json body;
  std::uint64_t seed = 0; // for request logs; 0 when unknown
};

inline Json error_json(const std::string &code, const std::string &message) {
  return Json{{"error", Json{{"code", code}, {"message", message}}}};
}

inline std::string new_correlation_id() {
  static thread_local std::mt19937_64 gen{std::random_device{}()};
  std::ostringstream os;
  os << std::hex << gen();
  return os.str();
}

inline HttpReply handle_health() {
  return HttpReply{200, Json{{"status", "ok"}, {"service", "tomolens"}, {"version", kVersion}}, 0};
}

inline HttpReply handle_run(std::string_view body_text) {
  const auto t0 = std::chrono::steady_clock::now();
  Json body;
  try {
    body = Json::parse(body_text.begin(), body_text.end());
  } catch (const Json::parse_error &e) {
    return HttpReply{400, error_json("malformed_json", e.what()), 0};
  }
  RunRequest req;
  try {
    req = parse_run_request(body);
  } catch (const InvalidArgument &e) {
    return HttpReply{400, error_json(e.code(), e.what()), 0};
  } catch (const ComputationError &e) {
    return HttpReply{422, error_json(e.code(), e.what()), 0};
  } catch (const Json::exception &e) {
    return HttpReply{400, error_json("malformed_request", e.what()), 0};
  }
  try {
    const ExperimentReport rep = run_experiment(req.spec);
    const double elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return HttpReply{200, run_response_json(rep, req.unit, elapsed), req.spec.seed};
  } catch (const ComputationError &e) {
    return HttpReply{422, error_json(e.code(), e.what()), req.spec.seed};
  } catch (const std::exception &) {
    Json err = error_json("internal_error", "internal error");
    err["error"]["correlation_id"] = new_correlation_id();
    return HttpReply{500, std::move(err), req.spec.seed};
  }
}

} // namespace tomolens
