//
// TomoLens - Copyright 2026 The TomoLens Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tomolens {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Largest qubit count for which dense 2^n x 2^n operators are built.
inline constexpr int kMaxDenseQubits = 6;

/// Thrown for inputs that violate a documented precondition (bad lengths,
/// out-of-range indices, malformed records). `code()` is a stable
/// machine-readable tag that the service and CLI surface verbatim.
class InvalidArgument : public std::invalid_argument {
public:
  InvalidArgument(std::string code, const std::string &message)
      : std::invalid_argument(message), code_(std::move(code)) {}

  const std::string &code() const noexcept { return code_; }

private:
  std::string code_;
};

/// Thrown when a computation cannot proceed on otherwise well-formed input,
/// e.g. the objective turned non-finite or no shots carry information.
class ComputationError : public std::runtime_error {
public:
  ComputationError(std::string code, const std::string &message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string &code() const noexcept { return code_; }

private:
  std::string code_;
};

inline constexpr std::size_t dimension_of(int n_qubits) {
  return std::size_t{1} << n_qubits;
}

/// Maps any finite angle into [0, 2pi).
inline double wrap_phase(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0)
    w += kTwoPi;
  // fmod can round a tiny negative input up to exactly 2pi.
  if (w >= kTwoPi)
    w = 0.0;
  return w;
}

/// min(|a-b|, 2pi-|a-b|) after wrapping both angles.
inline double circular_distance(double a, double b) {
  const double d = std::abs(wrap_phase(a) - wrap_phase(b));
  return std::min(d, kTwoPi - d);
}

/// e^{i phi} for phi in [0, 2pi). The argument is first reduced to
/// (-pi, pi] (exact for phi > pi), and cos/sin are evaluated on |r|, so
/// unit_phase(2pi - phi) is the exact conjugate of unit_phase(phi) whenever
/// both arguments are representable.
inline Complex unit_phase(double phi) {
  const double r = phi > kPi ? phi - kTwoPi : phi;
  const double a = std::abs(r);
  return {std::cos(a), std::copysign(std::sin(a), r)};
}

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

} // namespace tomolens
