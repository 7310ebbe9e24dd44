//
// TomoLens - Copyright 2026 The TomoLens Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "tomolens/common.hpp"

namespace tomolens {

/// Hyperspherical angle/phase coordinates of a pure n-qubit state.
///
/// Holds c = 2^n - 1 polar angles in [0, pi] and c phases in [0, 2pi). For a
/// single qubit these are the usual Bloch-sphere (theta, phi).
class PolarParams {
public:
  PolarParams(int n_qubits, std::vector<double> thetas, std::vector<double> phis)
      : n_qubits_(n_qubits), thetas_(std::move(thetas)), phis_(std::move(phis)) {
    if (n_qubits_ < 1 || n_qubits_ > kMaxDenseQubits)
      throw InvalidArgument("unsupported_qubit_count",
                            "n_qubits must be in [1, " + std::to_string(kMaxDenseQubits) +
                                "], got " + std::to_string(n_qubits_));
    const std::size_t c = count_for(n_qubits_);
    if (thetas_.size() != c || phis_.size() != c)
      throw InvalidArgument("dimension_mismatch",
                            "expected " + std::to_string(c) + " thetas and phis for " +
                                std::to_string(n_qubits_) + " qubit(s), got " +
                                std::to_string(thetas_.size()) + " and " +
                                std::to_string(phis_.size()));
    for (double t : thetas_)
      if (!(t >= 0.0 && t <= kPi))
        throw InvalidArgument("invalid_parameter",
                              "theta " + std::to_string(t) + " outside [0, pi]");
    for (double p : phis_)
      if (!(p >= 0.0 && p < kTwoPi))
        throw InvalidArgument("invalid_parameter",
                              "phi " + std::to_string(p) + " outside [0, 2pi)");
  }

  /// Single-qubit convenience constructor.
  static PolarParams single(double theta, double phi) { return PolarParams(1, {theta}, {phi}); }

  /// Builds params from a flat [thetas..., phis...] vector, clamping thetas
  /// into [0, pi] and wrapping phis into [0, 2pi).
  static PolarParams from_flat(int n_qubits, std::span<const double> flat) {
    const std::size_t c = count_for(n_qubits);
    if (flat.size() != 2 * c)
      throw InvalidArgument("dimension_mismatch", "flat parameter vector has wrong length");
    std::vector<double> thetas(c), phis(c);
    for (std::size_t i = 0; i < c; ++i) {
      thetas[i] = std::clamp(flat[i], 0.0, kPi);
      phis[i] = wrap_phase(flat[c + i]);
    }
    return PolarParams(n_qubits, std::move(thetas), std::move(phis));
  }

  static constexpr std::size_t count_for(int n_qubits) { return dimension_of(n_qubits) - 1; }

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t count() const noexcept { return thetas_.size(); }
  const std::vector<double> &thetas() const noexcept { return thetas_; }
  const std::vector<double> &phis() const noexcept { return phis_; }

  std::vector<double> flat() const {
    std::vector<double> out(thetas_);
    out.insert(out.end(), phis_.begin(), phis_.end());
    return out;
  }

  bool operator==(const PolarParams &) const = default;

private:
  int n_qubits_;
  std::vector<double> thetas_;
  std::vector<double> phis_;
};

/// Unit-norm amplitude vector over the computational basis. Index k labels
/// the ket whose big-endian n-bit expansion is k, so qubit 0 is the most
/// significant bit.
class PureState {
public:
  static constexpr double kNormTolerance = 1e-9;

  PureState(int n_qubits, CVector amplitudes)
      : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (n_qubits_ < 1 || n_qubits_ > kMaxDenseQubits)
      throw InvalidArgument("unsupported_qubit_count", "n_qubits out of range");
    if (static_cast<std::size_t>(amplitudes_.size()) != dimension_of(n_qubits_))
      throw InvalidArgument("dimension_mismatch",
                            "state of " + std::to_string(n_qubits_) + " qubit(s) needs " +
                                std::to_string(dimension_of(n_qubits_)) + " amplitudes");
    const double norm2 = amplitudes_.squaredNorm();
    if (!(std::abs(norm2 - 1.0) <= kNormTolerance))
      throw InvalidArgument("not_normalized",
                            "amplitudes have squared norm " + std::to_string(norm2));
  }

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  const CVector &amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](std::size_t k) const { return amplitudes_(static_cast<Eigen::Index>(k)); }

private:
  int n_qubits_;
  CVector amplitudes_;
};

/// Single-qubit density matrix obtained by tracing out the other qubits.
class ReducedDensityMatrix {
public:
  static constexpr double kTolerance = 1e-9;

  explicit ReducedDensityMatrix(const Eigen::Matrix2cd &entries) : entries_(entries) {
    if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kTolerance)
      throw InvalidArgument("invalid_density_matrix", "matrix is not Hermitian");
    const double tr = entries_.trace().real();
    if (std::abs(tr - 1.0) > kTolerance)
      throw InvalidArgument("invalid_density_matrix", "trace is not 1");
    // Smallest eigenvalue of a 2x2 Hermitian matrix.
    const double a = entries_(0, 0).real();
    const double d = entries_(1, 1).real();
    const double lo = 0.5 * (tr - std::sqrt((a - d) * (a - d) + 4.0 * std::norm(entries_(0, 1))));
    if (lo < -kTolerance)
      throw InvalidArgument("invalid_density_matrix", "matrix has a negative eigenvalue");
  }

  const Eigen::Matrix2cd &entries() const noexcept { return entries_; }
  Complex operator()(int r, int c) const { return entries_(r, c); }

private:
  Eigen::Matrix2cd entries_;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

/// Amplitudes kept as separate magnitudes and unit phase factors. Born
/// probabilities of diagonal (I/Z) settings computed from this form do not
/// depend on the phases at all, not even through rounding.
struct PolarAmplitudes {
  int n_qubits = 1;
  std::vector<double> magnitudes;
  std::vector<Complex> phases;
};

/// Expands polar coordinates:
///   a_0 = cos(t_1/2)
///   a_k = sin(t_1/2)...sin(t_k/2) cos(t_{k+1}/2) e^{i p_k},   0 < k < c
///   a_c = sin(t_1/2)...sin(t_c/2) e^{i p_c}
inline PolarAmplitudes polar_amplitudes(const PolarParams &params) {
  const auto &thetas = params.thetas();
  const auto &phis = params.phis();
  const std::size_t c = params.count();
  PolarAmplitudes out{params.n_qubits(), std::vector<double>(c + 1),
                      std::vector<Complex>(c + 1, Complex(1.0, 0.0))};
  double prefix = 1.0;
  for (std::size_t k = 0; k < c; ++k) {
    const double half = 0.5 * thetas[k];
    out.magnitudes[k] = prefix * std::cos(half);
    prefix *= std::sin(half);
  }
  out.magnitudes[c] = prefix;
  for (std::size_t k = 1; k <= c; ++k)
    out.phases[k] = unit_phase(phis[k - 1]);
  return out;
}

inline PureState params_to_state(const PolarParams &params) {
  const PolarAmplitudes polar = polar_amplitudes(params);
  CVector amps(static_cast<Eigen::Index>(polar.magnitudes.size()));
  for (std::size_t k = 0; k < polar.magnitudes.size(); ++k)
    amps(static_cast<Eigen::Index>(k)) = polar.magnitudes[k] * polar.phases[k];
  return PureState(params.n_qubits(), std::move(amps));
}

/// Inverts the single-qubit map for a state whose first amplitude is real
/// and non-negative. The phase is set to 0 at the poles.
inline PolarParams state_to_params_single(const PureState &state) {
  if (state.n_qubits() != 1)
    throw InvalidArgument("dimension_mismatch", "state_to_params_single needs a 1-qubit state");
  const double theta = 2.0 * std::acos(std::clamp(state[0].real(), -1.0, 1.0));
  const Complex beta = state[1];
  const double phi = std::abs(beta) < 1e-12 ? 0.0 : wrap_phase(std::arg(beta));
  return PolarParams::single(std::clamp(theta, 0.0, kPi), phi);
}

/// Inverts params_to_state for any qubit count. The global phase is removed
/// first so that a_0 is real and non-negative; phases attached to vanishing
/// amplitudes, and angles below a vanishing tail, are reported as 0.
inline PolarParams state_to_params(const PureState &state) {
  const std::size_t dim = state.dimension();
  const std::size_t c = dim - 1;
  CVector amps = state.amplitudes() / state.amplitudes().norm();
  const double a0_mag = std::abs(amps(0));
  if (a0_mag > 0.0)
    amps *= std::conj(amps(0)) / a0_mag;

  // tail[k] = sqrt(sum_{m >= k} |a_m|^2)
  std::vector<double> tail(dim + 1, 0.0);
  for (std::size_t k = dim; k-- > 0;)
    tail[k] = std::hypot(tail[k + 1], std::abs(amps(static_cast<Eigen::Index>(k))));

  constexpr double kVanish = 1e-12;
  std::vector<double> thetas(c), phis(c);
  for (std::size_t k = 0; k < c; ++k) {
    const double rk = std::abs(amps(static_cast<Eigen::Index>(k)));
    thetas[k] = tail[k] < kVanish ? 0.0 : std::clamp(2.0 * std::atan2(tail[k + 1], rk), 0.0, kPi);
  }
  for (std::size_t k = 1; k <= c; ++k) {
    const Complex a = amps(static_cast<Eigen::Index>(k));
    phis[k - 1] = std::abs(a) < kVanish ? 0.0 : wrap_phase(std::arg(a));
  }
  return PolarParams(state.n_qubits(), std::move(thetas), std::move(phis));
}

/// |<a|b>|^2
inline double fidelity(const PureState &a, const PureState &b) {
  if (a.n_qubits() != b.n_qubits())
    throw InvalidArgument("dimension_mismatch", "fidelity between states of different size");
  const Complex overlap = a.amplitudes().dot(b.amplitudes()); // conjugates the left operand
  return std::clamp(std::norm(overlap), 0.0, 1.0);
}

inline ReducedDensityMatrix reduced_density_matrix(const PureState &state, int keep) {
  const int n = state.n_qubits();
  if (keep < 0 || keep >= n)
    throw InvalidArgument("index_out_of_range",
                          "qubit index " + std::to_string(keep) + " outside [0, " +
                              std::to_string(n) + ")");
  const std::size_t mask = std::size_t{1} << (n - 1 - keep);
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    if (i & mask)
      continue;
    const Complex lo = state[i];
    const Complex hi = state[i | mask];
    rho(0, 0) += std::norm(lo);
    rho(1, 1) += std::norm(hi);
    rho(0, 1) += lo * std::conj(hi);
  }
  rho(1, 0) = std::conj(rho(0, 1));
  return ReducedDensityMatrix(rho);
}

/// (Tr rho X, Tr rho Y, Tr rho Z), written out for a 2x2 Hermitian rho.
inline BlochVector bloch_vector(const ReducedDensityMatrix &rho) {
  const Complex off = rho(0, 1);
  return BlochVector{2.0 * off.real(), -2.0 * off.imag(), (rho(0, 0) - rho(1, 1)).real()};
}

inline std::vector<BlochVector> per_qubit_bloch(const PureState &state) {
  std::vector<BlochVector> out;
  out.reserve(static_cast<std::size_t>(state.n_qubits()));
  for (int k = 0; k < state.n_qubits(); ++k)
    out.push_back(bloch_vector(reduced_density_matrix(state, k)));
  return out;
}

} // namespace tomolens
