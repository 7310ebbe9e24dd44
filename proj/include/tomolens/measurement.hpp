//
// TomoLens - Copyright 2026 The TomoLens Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tomolens/common.hpp"
#include "tomolens/random.hpp"
#include "tomolens/statemodel.hpp"

namespace tomolens {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char to_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline Eigen::Matrix2cd pauli_2x2(Pauli p) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m;
  switch (p) {
  case Pauli::I: m << 1, 0, 0, 1; break;
  case Pauli::X: m << 0, 1, 1, 0; break;
  case Pauli::Y: m << 0, -1i, 1i, 0; break;
  case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

/// Measurement setting: one Pauli label per qubit, qubit 0 first. The
/// all-identity string carries no information and cannot be constructed.
class PauliString {
public:
  explicit PauliString(std::vector<Pauli> labels) : labels_(std::move(labels)) {
    if (labels_.empty() || labels_.size() > static_cast<std::size_t>(kMaxDenseQubits))
      throw InvalidArgument("invalid_setting", "Pauli string length must be in [1, " +
                                                   std::to_string(kMaxDenseQubits) + "]");
    if (std::all_of(labels_.begin(), labels_.end(), [](Pauli p) { return p == Pauli::I; }))
      throw InvalidArgument("invalid_setting", "the all-identity Pauli string is not a measurement");
  }

  /// Parses an uppercase string such as "XZ" or "IY".
  static PauliString parse(std::string_view text) {
    std::vector<Pauli> labels;
    labels.reserve(text.size());
    for (char ch : text) {
      switch (ch) {
      case 'I': labels.push_back(Pauli::I); break;
      case 'X': labels.push_back(Pauli::X); break;
      case 'Y': labels.push_back(Pauli::Y); break;
      case 'Z': labels.push_back(Pauli::Z); break;
      default:
        throw InvalidArgument("invalid_setting",
                              "unknown Pauli label '" + std::string(1, ch) + "' in \"" +
                                  std::string(text) + "\"");
      }
    }
    return PauliString(std::move(labels));
  }

  int n_qubits() const noexcept { return static_cast<int>(labels_.size()); }
  const std::vector<Pauli> &labels() const noexcept { return labels_; }
  Pauli operator[](std::size_t k) const { return labels_[k]; }

  std::string str() const {
    std::string s;
    for (Pauli p : labels_)
      s.push_back(to_char(p));
    return s;
  }

  /// Position in enumerate_settings(n_qubits()): the base-4 value of the
  /// labels (I=0, X=1, Y=2, Z=3, qubit 0 most significant) minus one.
  std::uint64_t index() const noexcept {
    std::uint64_t v = 0;
    for (Pauli p : labels_)
      v = 4 * v + static_cast<std::uint64_t>(p);
    return v - 1;
  }

  auto operator<=>(const PauliString &) const = default;

private:
  std::vector<Pauli> labels_;
};

/// All 4^n - 1 non-identity strings in lexicographic I < X < Y < Z order.
inline std::vector<PauliString> enumerate_settings(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxDenseQubits)
    throw InvalidArgument("unsupported_qubit_count", "n_qubits out of range");
  const std::uint64_t total = std::uint64_t{1} << (2 * n_qubits);
  std::vector<PauliString> out;
  out.reserve(total - 1);
  for (std::uint64_t code = 1; code < total; ++code) {
    std::vector<Pauli> labels(static_cast<std::size_t>(n_qubits));
    std::uint64_t v = code;
    for (int q = n_qubits - 1; q >= 0; --q, v >>= 2)
      labels[static_cast<std::size_t>(q)] = static_cast<Pauli>(v & 3);
    out.emplace_back(std::move(labels));
  }
  return out;
}

/// Dense tensor product of the single-qubit Pauli matrices.
inline CMatrix pauli_matrix(const PauliString &string) {
  const int n = string.n_qubits();
  const auto dim = static_cast<Eigen::Index>(dimension_of(n));
  std::vector<Eigen::Matrix2cd> factors;
  for (Pauli p : string.labels())
    factors.push_back(pauli_2x2(p));
  CMatrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      Complex v(1.0, 0.0);
      for (int q = 0; q < n && v != Complex(0.0, 0.0); ++q) {
        const int shift = n - 1 - q;
        v *= factors[static_cast<std::size_t>(q)]((r >> shift) & 1, (c >> shift) & 1);
      }
      m(r, c) = v;
    }
  }
  return m;
}

/// (I + M) / 2
inline CMatrix projector_plus(const PauliString &string) {
  const CMatrix m = pauli_matrix(string);
  return 0.5 * (CMatrix::Identity(m.rows(), m.cols()) + m);
}

/// (I - M) / 2
inline CMatrix projector_minus(const PauliString &string) {
  const CMatrix m = pauli_matrix(string);
  return 0.5 * (CMatrix::Identity(m.rows(), m.cols()) - m);
}

namespace detail {

struct PauliAction {
  std::size_t flip = 0;      // bits flipped by X and Y
  std::size_t sign_mask = 0; // bits picking up (-1)^bit from Z and Y
  Complex global{1.0, 0.0};  // i^(number of Y)
};

// A Pauli string maps |j> to global * (-1)^popcount(j & sign_mask) |j ^ flip>,
// using Y = i X Z on each qubit.
inline PauliAction pauli_action(const PauliString &string, int n_qubits) {
  const int n = string.n_qubits();
  if (n != n_qubits)
    throw InvalidArgument("dimension_mismatch", "setting " + string.str() + " does not match a " +
                                                    std::to_string(n_qubits) + "-qubit state");
  static constexpr std::array<Complex, 4> kIPow{Complex(1, 0), Complex(0, 1), Complex(-1, 0),
                                                Complex(0, -1)};
  PauliAction act;
  int n_y = 0;
  for (int q = 0; q < n; ++q) {
    const std::size_t bit = std::size_t{1} << (n - 1 - q);
    switch (string[static_cast<std::size_t>(q)]) {
    case Pauli::I: break;
    case Pauli::X: act.flip |= bit; break;
    case Pauli::Y: act.flip |= bit; act.sign_mask |= bit; ++n_y; break;
    case Pauli::Z: act.sign_mask |= bit; break;
    }
  }
  act.global = kIPow[static_cast<std::size_t>(n_y % 4)];
  return act;
}

inline double parity_sign(std::size_t j, std::size_t mask) {
  return (std::popcount(j & mask) & 1) ? -1.0 : 1.0;
}

} // namespace detail

/// <psi|M|psi> evaluated from the action of M on basis kets.
inline double pauli_expectation(const PureState &state, const PauliString &string) {
  const auto act = detail::pauli_action(string, state.n_qubits());
  Complex acc(0.0, 0.0);
  for (std::size_t j = 0; j < state.dimension(); ++j)
    acc += std::conj(state[j ^ act.flip]) * (detail::parity_sign(j, act.sign_mask) * state[j]);
  return (act.global * acc).real();
}

/// Same expectation from polar-form amplitudes. Diagonal settings reduce to
/// a signed sum of squared magnitudes.
inline double pauli_expectation(const PolarAmplitudes &polar, const PauliString &string) {
  const auto act = detail::pauli_action(string, polar.n_qubits);
  const std::size_t dim = polar.magnitudes.size();
  if (act.flip == 0) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dim; ++j)
      acc += detail::parity_sign(j, act.sign_mask) * polar.magnitudes[j] * polar.magnitudes[j];
    return acc;
  }
  Complex acc(0.0, 0.0);
  for (std::size_t j = 0; j < dim; ++j) {
    const std::size_t k = j ^ act.flip;
    const double weight = detail::parity_sign(j, act.sign_mask) * polar.magnitudes[k] *
                          polar.magnitudes[j];
    acc += weight * (std::conj(polar.phases[k]) * polar.phases[j]);
  }
  return (act.global * acc).real();
}

/// <psi|P|psi> for an arbitrary dense projector, clipped to [0, 1].
inline double born_probability(const PureState &state, const CMatrix &projector) {
  if (projector.rows() != static_cast<Eigen::Index>(state.dimension()))
    throw InvalidArgument("dimension_mismatch", "projector does not match the state");
  const Complex p = state.amplitudes().dot(projector * state.amplitudes());
  return std::clamp(p.real(), 0.0, 1.0);
}

/// Probability of the +1 eigenvalue, <psi|(I + M)/2|psi>, clipped to [0, 1].
inline double outcome_prob_plus(const PureState &state, const PauliString &string) {
  return std::clamp(0.5 * (1.0 + pauli_expectation(state, string)), 0.0, 1.0);
}

inline double outcome_prob_plus(const PolarAmplitudes &polar, const PauliString &string) {
  return std::clamp(0.5 * (1.0 + pauli_expectation(polar, string)), 0.0, 1.0);
}

inline double outcome_prob_minus(const PureState &state, const PauliString &string) {
  return 1.0 - outcome_prob_plus(state, string);
}

/// Closed-form single-qubit probabilities of the +1 outcome.
inline double single_qubit_prob_plus(double theta, double phi, Pauli basis) {
  switch (basis) {
  case Pauli::Z: return 0.5 * (1.0 + std::cos(theta));
  case Pauli::X: return 0.5 * (1.0 + std::cos(phi) * std::sin(theta));
  case Pauli::Y: return 0.5 * (1.0 + std::sin(phi) * std::sin(theta));
  case Pauli::I: break;
  }
  throw InvalidArgument("invalid_setting", "identity is not a measurement basis");
}

struct OutcomeCounts {
  std::int64_t shots = 0;
  std::int64_t plus_count = 0;
};

/// One setting's shot count and number of +1 outcomes.
struct MeasurementRecord {
  PauliString setting;
  std::int64_t shots = 0;
  std::int64_t plus_count = 0;

  MeasurementRecord(PauliString s, std::int64_t n, std::int64_t plus)
      : setting(std::move(s)), shots(n), plus_count(plus) {
    if (shots < 0)
      throw InvalidArgument("invalid_shot_count", "shots must be non-negative");
    if (plus_count < 0 || plus_count > shots)
      throw InvalidArgument("malformed_record", "plus_count must lie in [0, shots] for " +
                                                    setting.str());
  }
};

using OutcomeSample = MeasurementRecord;

/// Draws the number of +1 outcomes from Binomial(shots, p_plus). Degenerate
/// cases (shots == 0, p in {0, 1}) consume no randomness.
inline OutcomeCounts sample_outcomes(double p_plus, std::int64_t shots, Rng &rng) {
  if (shots < 0)
    throw InvalidArgument("invalid_shot_count", "shots must be non-negative");
  if (!(p_plus >= 0.0 && p_plus <= 1.0))
    throw InvalidArgument("invalid_probability", "p_plus outside [0, 1]");
  if (shots == 0 || p_plus == 0.0)
    return {shots, 0};
  if (p_plus == 1.0)
    return {shots, shots};
  std::binomial_distribution<std::int64_t> dist(shots, p_plus);
  return {shots, dist(rng)};
}

/// Simulates `shots` measurements of `setting` on `state`, drawing from the
/// stream keyed by (seed, setting index).
inline MeasurementRecord simulate_setting(const PureState &state, const PauliString &setting,
                                          std::int64_t shots, std::uint64_t seed) {
  Rng rng = make_stream(seed, StreamDomain::kSampling, setting.index());
  const OutcomeCounts counts = sample_outcomes(outcome_prob_plus(state, setting), shots, rng);
  return MeasurementRecord(setting, counts.shots, counts.plus_count);
}

inline MeasurementRecord simulate_setting(const PolarAmplitudes &polar, const PauliString &setting,
                                          std::int64_t shots, std::uint64_t seed) {
  Rng rng = make_stream(seed, StreamDomain::kSampling, setting.index());
  const OutcomeCounts counts = sample_outcomes(outcome_prob_plus(polar, setting), shots, rng);
  return MeasurementRecord(setting, counts.shots, counts.plus_count);
}

} // namespace tomolens
