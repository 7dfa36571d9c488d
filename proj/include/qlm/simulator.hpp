// Copyright 2026 The QLM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense statevector engine.
//
// Rotation gates use the full-angle convention R_P(theta) = exp(-i theta P),
// so Rx(theta) = cos(theta) I - i sin(theta) X and every expectation value is
// pi-periodic in each angle. CRY is the single exception: it applies the
// conventional RY(theta) = exp(-i theta Y / 2) to the target when the control
// is set.
//
// Qubit 0 is the least-significant bit of the amplitude index.

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qlm/bitstring.hpp"
#include "qlm/error.hpp"

namespace qlm {

enum class GateKind { PauliX, Rx, Rz, Rxx, Ryy, Rzz, CRY };

constexpr std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::PauliX: return "X";
    case GateKind::Rx: return "Rx";
    case GateKind::Rz: return "Rz";
    case GateKind::Rxx: return "Rxx";
    case GateKind::Ryy: return "Ryy";
    case GateKind::Rzz: return "Rzz";
    case GateKind::CRY: return "CRY";
  }
  return "?";
}

inline std::optional<GateKind> parse_gate_kind(std::string_view name) {
  for (GateKind k : {GateKind::PauliX, GateKind::Rx, GateKind::Rz, GateKind::Rxx,
                     GateKind::Ryy, GateKind::Rzz, GateKind::CRY}) {
    if (gate_name(k) == name) return k;
  }
  return std::nullopt;
}

constexpr int gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::PauliX:
    case GateKind::Rx:
    case GateKind::Rz:
      return 1;
    default:
      return 2;
  }
}

template <typename Scalar>
struct BasicGate {
  GateKind kind = GateKind::PauliX;
  std::array<int, 2> targets{0, 0};
  Scalar angle = 0;

  int arity() const { return gate_arity(kind); }

  static BasicGate x(int q) { return {GateKind::PauliX, {q, q}, Scalar(0)}; }
  static BasicGate rx(int q, Scalar theta) { return {GateKind::Rx, {q, q}, theta}; }
  static BasicGate rz(int q, Scalar theta) { return {GateKind::Rz, {q, q}, theta}; }
  static BasicGate rxx(int a, int b, Scalar theta) { return {GateKind::Rxx, {a, b}, theta}; }
  static BasicGate ryy(int a, int b, Scalar theta) { return {GateKind::Ryy, {a, b}, theta}; }
  static BasicGate rzz(int a, int b, Scalar theta) { return {GateKind::Rzz, {a, b}, theta}; }
  static BasicGate cry(int control, int target, Scalar theta) {
    return {GateKind::CRY, {control, target}, theta};
  }
};

template <typename Scalar>
class BasicStatevector {
 public:
  using Complex = std::complex<Scalar>;
  using Amplitudes = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  static constexpr int kMaxQubits = 30;

  /// |0...0> on `num_qubits` qubits.
  explicit BasicStatevector(int num_qubits) : num_qubits_(num_qubits) {
    require(num_qubits >= 1 && num_qubits <= kMaxQubits, "num_qubits must be in [1, 30]");
    amplitudes_ = Amplitudes::Zero(Eigen::Index{1} << num_qubits);
    amplitudes_(0) = Complex(1);
  }

  /// Wraps arbitrary amplitudes; they are normalized, and must be nonzero.
  static BasicStatevector from_amplitudes(Amplitudes amplitudes) {
    const Eigen::Index dim = amplitudes.size();
    require(dim >= 2 && (dim & (dim - 1)) == 0, "amplitude count must be a power of two");
    const Scalar norm = amplitudes.norm();
    require(std::isfinite(norm) && norm > Scalar(0), "amplitudes must have finite nonzero norm");
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    BasicStatevector s(n);
    s.amplitudes_ = amplitudes / norm;
    return s;
  }

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dimension() const { return amplitudes_.size(); }
  const Amplitudes& amplitudes() const { return amplitudes_; }
  Scalar norm_squared() const { return amplitudes_.squaredNorm(); }

  /// Raw mutable view used by the gate kernels.
  Complex* data() { return amplitudes_.data(); }

 private:
  int num_qubits_;
  Amplitudes amplitudes_;
};

using Gate = BasicGate<double>;
using Statevector = BasicStatevector<double>;

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

/// 2x2 unitary of a one-qubit gate.
template <typename Scalar>
Matrix2c<Scalar> single_qubit_matrix(GateKind kind, Scalar theta) {
  using C = std::complex<Scalar>;
  const Scalar c = std::cos(theta), s = std::sin(theta);
  Matrix2c<Scalar> m;
  switch (kind) {
    case GateKind::PauliX:
      m << C(0), C(1), C(1), C(0);
      break;
    case GateKind::Rx:
      m << C(c), C(0, -s), C(0, -s), C(c);
      break;
    case GateKind::Rz:
      m << C(c, -s), C(0), C(0), C(c, s);
      break;
    default:
      fail(ErrorKind::InvalidArgument, std::string(gate_name(kind)) + " is not a one-qubit gate");
  }
  return m;
}

/// 4x4 unitary of a two-qubit gate in the local basis l = b0 + 2*b1, where
/// b0 is the bit of targets[0] (the control for CRY) and b1 of targets[1].
template <typename Scalar>
Matrix4c<Scalar> two_qubit_matrix(GateKind kind, Scalar theta) {
  using C = std::complex<Scalar>;
  const Scalar c = std::cos(theta), s = std::sin(theta);
  const C mis(0, -s);
  Matrix4c<Scalar> m = Matrix4c<Scalar>::Zero();
  switch (kind) {
    case GateKind::Rxx:
      m.diagonal().setConstant(C(c));
      m(0, 3) = m(3, 0) = m(1, 2) = m(2, 1) = mis;
      break;
    case GateKind::Ryy:
      // Y(x)Y maps |00> -> -|11> and |01> -> |10>.
      m.diagonal().setConstant(C(c));
      m(0, 3) = m(3, 0) = -mis;
      m(1, 2) = m(2, 1) = mis;
      break;
    case GateKind::Rzz:
      m(0, 0) = m(3, 3) = C(c, -s);
      m(1, 1) = m(2, 2) = C(c, s);
      break;
    case GateKind::CRY: {
      const Scalar ch = std::cos(theta / 2), sh = std::sin(theta / 2);
      m(0, 0) = m(2, 2) = C(1);
      m(1, 1) = m(3, 3) = C(ch);
      m(1, 3) = C(-sh);
      m(3, 1) = C(sh);
      break;
    }
    default:
      fail(ErrorKind::InvalidArgument, std::string(gate_name(kind)) + " is not a two-qubit gate");
  }
  return m;
}

/// Explicit small unitary (2x2 or 4x4) of a gate.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> gate_matrix(
    const BasicGate<Scalar>& gate) {
  if (gate.arity() == 1) return single_qubit_matrix(gate.kind, gate.angle);
  return two_qubit_matrix(gate.kind, gate.angle);
}

namespace detail {

inline std::uint64_t insert_zero_bit(std::uint64_t value, int position) {
  const std::uint64_t low = value & ((std::uint64_t{1} << position) - 1);
  return ((value >> position) << (position + 1)) | low;
}

template <typename Scalar>
void apply_one_qubit(BasicStatevector<Scalar>& state, int q, const Matrix2c<Scalar>& m) {
  auto* amp = state.data();
  const std::uint64_t mask = std::uint64_t{1} << q;
  const auto dim = static_cast<std::uint64_t>(state.dimension());
  for (std::uint64_t block = 0; block < dim; block += 2 * mask) {
    for (std::uint64_t i = block; i < block + mask; ++i) {
      const auto a = amp[i];
      const auto b = amp[i | mask];
      amp[i] = m(0, 0) * a + m(0, 1) * b;
      amp[i | mask] = m(1, 0) * a + m(1, 1) * b;
    }
  }
}

template <typename Scalar>
void apply_diagonal_one_qubit(BasicStatevector<Scalar>& state, int q, std::complex<Scalar> d0,
                              std::complex<Scalar> d1) {
  auto* amp = state.data();
  const auto dim = static_cast<std::uint64_t>(state.dimension());
  for (std::uint64_t i = 0; i < dim; ++i) amp[i] *= ((i >> q) & 1U) ? d1 : d0;
}

template <typename Scalar>
void apply_two_qubit(BasicStatevector<Scalar>& state, int q0, int q1, const Matrix4c<Scalar>& m) {
  auto* amp = state.data();
  const std::uint64_t m0 = std::uint64_t{1} << q0;
  const std::uint64_t m1 = std::uint64_t{1} << q1;
  const int lo = std::min(q0, q1), hi = std::max(q0, q1);
  const auto quarter = static_cast<std::uint64_t>(state.dimension()) >> 2;
  std::array<std::complex<Scalar>, 4> in;
  for (std::uint64_t k = 0; k < quarter; ++k) {
    const std::uint64_t base = insert_zero_bit(insert_zero_bit(k, lo), hi);
    const std::array<std::uint64_t, 4> idx{base, base | m0, base | m1, base | m0 | m1};
    for (int r = 0; r < 4; ++r) in[r] = amp[idx[r]];
    for (int r = 0; r < 4; ++r) {
      amp[idx[r]] = m(r, 0) * in[0] + m(r, 1) * in[1] + m(r, 2) * in[2] + m(r, 3) * in[3];
    }
  }
}

template <typename Scalar>
void apply_zz_phase(BasicStatevector<Scalar>& state, int q0, int q1, Scalar theta) {
  auto* amp = state.data();
  const std::complex<Scalar> same(std::cos(theta), -std::sin(theta));
  const std::complex<Scalar> diff = std::conj(same);
  const auto dim = static_cast<std::uint64_t>(state.dimension());
  for (std::uint64_t i = 0; i < dim; ++i) {
    amp[i] *= (((i >> q0) ^ (i >> q1)) & 1U) ? diff : same;
  }
}

}  // namespace detail

template <typename Scalar>
void validate_gate(const BasicGate<Scalar>& gate, int num_qubits) {
  const int n = gate.arity();
  for (int t = 0; t < n; ++t) {
    require(gate.targets[t] >= 0 && gate.targets[t] < num_qubits,
            std::string(gate_name(gate.kind)) + ": target qubit " + std::to_string(gate.targets[t]) +
                " out of range for " + std::to_string(num_qubits) + " qubits");
  }
  if (n == 2) {
    require(gate.targets[0] != gate.targets[1],
            std::string(gate_name(gate.kind)) + ": targets must be distinct");
  }
}

/// Multiplies the state in place by the gate's unitary. Amplitudes are
/// updated by strided passes; no full-register matrix is formed.
template <typename Scalar>
void apply_gate(BasicStatevector<Scalar>& state, const BasicGate<Scalar>& gate) {
  validate_gate(gate, state.num_qubits());
  const int a = gate.targets[0], b = gate.targets[1];
  switch (gate.kind) {
    case GateKind::Rz: {
      const std::complex<Scalar> d0(std::cos(gate.angle), -std::sin(gate.angle));
      detail::apply_diagonal_one_qubit(state, a, d0, std::conj(d0));
      break;
    }
    case GateKind::PauliX:
    case GateKind::Rx:
      detail::apply_one_qubit(state, a, single_qubit_matrix(gate.kind, gate.angle));
      break;
    case GateKind::Rzz:
      detail::apply_zz_phase(state, a, b, gate.angle);
      break;
    default:
      detail::apply_two_qubit(state, a, b, two_qubit_matrix(gate.kind, gate.angle));
      break;
  }
}

template <typename Scalar>
BasicStatevector<Scalar> init_basis_state(int num_qubits, const BitString& bits) {
  require(bits.width == num_qubits, "basis state needs " + std::to_string(num_qubits) +
                                        " bits, got " + std::to_string(bits.width));
  BasicStatevector<Scalar> state(num_qubits);
  for (int q = 0; q < num_qubits; ++q) {
    if (bits.bit(q)) apply_gate(state, BasicGate<Scalar>::x(q));
  }
  return state;
}

inline Statevector init_basis_state(int num_qubits, const BitString& bits) {
  return init_basis_state<double>(num_qubits, bits);
}

inline Statevector init_basis_state(int num_qubits, std::string_view bits) {
  return init_basis_state<double>(num_qubits, BitString::parse(bits));
}

/// Entry j is the probability that qubits[k] reads bit k of j, for all k.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> marginal_probabilities(const BasicStatevector<Scalar>& state,
                                                                std::span<const int> qubits) {
  const int n = state.num_qubits();
  std::uint64_t seen = 0;
  for (int q : qubits) {
    require(q >= 0 && q < n, "marginal qubit " + std::to_string(q) + " out of range");
    require(!((seen >> q) & 1U), "marginal qubit " + std::to_string(q) + " listed twice");
    seen |= std::uint64_t{1} << q;
  }
  const auto m = static_cast<int>(qubits.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> probs =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(Eigen::Index{1} << m);
  const auto& amp = state.amplitudes();
  for (Eigen::Index i = 0; i < amp.size(); ++i) {
    const auto u = static_cast<std::uint64_t>(i);
    std::uint64_t j = 0;
    for (int k = 0; k < m; ++k) j |= ((u >> qubits[k]) & 1U) << k;
    probs(static_cast<Eigen::Index>(j)) += std::norm(amp(i));
  }
  return probs;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> marginal_probabilities(const BasicStatevector<Scalar>& state,
                                                                std::initializer_list<int> qubits) {
  return marginal_probabilities(state, std::span<const int>(qubits.begin(), qubits.size()));
}

/// Full-register distribution |amplitude_i|^2.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> probabilities(const BasicStatevector<Scalar>& state) {
  return state.amplitudes().cwiseAbs2();
}

/// Multinomial draw of `shots` outcomes on `qubits`, keyed by the outcome's
/// bit string (qubits[0] is the rightmost character).
template <typename Scalar>
std::map<std::string, long> sample(const BasicStatevector<Scalar>& state, std::span<const int> qubits,
                                   long shots, std::uint64_t seed) {
  require(shots >= 1, "shots must be at least 1");
  const auto probs = marginal_probabilities(state, qubits);
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> dist(probs.data(), probs.data() + probs.size());
  std::vector<long> counts(static_cast<std::size_t>(probs.size()), 0);
  for (long s = 0; s < shots; ++s) ++counts[dist(rng)];
  std::map<std::string, long> histogram;
  const int width = static_cast<int>(qubits.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] > 0) histogram[BitString(j, width).str()] = counts[j];
  }
  return histogram;
}

}  // namespace qlm
