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

// Layered quantum learning model built from two-qubit entangling nodes.
//
// A node on qubits (a, b) owns nine consecutive angles:
//   [0..2] Euler triple on a, [3..5] Euler triple on b, [6..8] interaction.
// An Euler triple (t1, t2, t3) is the operator R1(t1) R2(t2) R3(t3) with the
// default kinds Rx, Rz, Rx; as an operator product, R3(t3) acts first. The
// interaction Rxx(t1) Ryy(t2) Rzz(t3) is applied after both Euler triples
// (its factors commute). After the last layer every qubit gets one more
// Euler triple; those angles follow all node angles in the parameter vector.
//
// Input bits occupy qubits 0..Nx-1 and output qubits are Nx..Nq-1, prepared
// in |0>. A layout with Ny = 0 describes a same-width state map whose
// output is read from all qubits.

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qlm/bitstring.hpp"
#include "qlm/simulator.hpp"

namespace qlm {

using ParameterVector = Eigen::VectorXd;

enum class Task { Classification, Dynamics };

struct NodeSpec {
  int qubit_a = 0;
  int qubit_b = 1;
  int param_offset = 0;
};

/// Gate kinds used inside every node. Euler slots take one-qubit rotations,
/// interaction slots two-qubit rotations.
struct NodeGates {
  std::array<GateKind, 3> euler{GateKind::Rx, GateKind::Rz, GateKind::Rx};
  std::array<GateKind, 3> interaction{GateKind::Rxx, GateKind::Ryy, GateKind::Rzz};

  friend bool operator==(const NodeGates&, const NodeGates&) = default;
};

/// One rotation of the compiled circuit, in application order.
struct ParameterizedGate {
  GateKind kind;
  std::array<int, 2> targets;
  int param_index;
};

using QubitPair = std::pair<int, int>;

class CircuitLayout {
 public:
  static constexpr int kParamsPerNode = 9;
  static constexpr int kParamsPerEuler = 3;
  static constexpr int kMaxQubits = 24;

  CircuitLayout(int num_input_qubits, int num_output_qubits,
                const std::vector<std::vector<QubitPair>>& layers, NodeGates gates = {});

  int num_qubits() const { return num_input_qubits_ + num_output_qubits_; }
  int num_input_qubits() const { return num_input_qubits_; }
  int num_output_qubits() const { return num_output_qubits_; }
  const std::vector<std::vector<NodeSpec>>& layers() const { return layers_; }
  const std::vector<NodeSpec>& nodes() const { return nodes_; }
  const NodeGates& node_gates() const { return gates_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int parameter_count() const { return kParamsPerNode * node_count() + kParamsPerEuler * num_qubits(); }
  int final_euler_offset(int qubit) const { return kParamsPerNode * node_count() + kParamsPerEuler * qubit; }

  /// Qubits whose joint distribution is the model output.
  const std::vector<int>& output_qubits() const { return output_qubits_; }
  int output_width() const { return static_cast<int>(output_qubits_.size()); }

  const std::vector<ParameterizedGate>& compiled() const { return compiled_; }

  /// Layers as plain qubit pairs, for serialization.
  std::vector<std::vector<QubitPair>> pairs() const;

  friend bool operator==(const CircuitLayout& a, const CircuitLayout& b) {
    return a.num_input_qubits_ == b.num_input_qubits_ && a.num_output_qubits_ == b.num_output_qubits_ &&
           a.gates_ == b.gates_ && a.pairs() == b.pairs();
  }

 private:
  int num_input_qubits_;
  int num_output_qubits_;
  NodeGates gates_;
  std::vector<std::vector<NodeSpec>> layers_;
  std::vector<NodeSpec> nodes_;
  std::vector<int> output_qubits_;
  std::vector<ParameterizedGate> compiled_;
};

/// Alternating brickwork: odd layers pair (0,1),(2,3),..., even layers pair
/// (1,2),(3,4),... Layers that would be empty are omitted.
CircuitLayout build_brickwork_layout(int num_input_qubits, int num_output_qubits, int num_layers);

/// Layout on `num_input_qubits + num_output_qubits` qubits that starts with
/// the image of `small` under `embedding` and continues with
/// `extra_layers` brickwork layers over the full register.
CircuitLayout embed_layout(const CircuitLayout& small, std::span<const int> embedding, int num_input_qubits,
                           int num_output_qubits, int extra_layers);

struct QlmModel {
  CircuitLayout layout;
  ParameterVector params;
  Task task = Task::Classification;

  QlmModel(CircuitLayout l, ParameterVector p);
  QlmModel(CircuitLayout l, ParameterVector p, Task t);

  /// All angles zero: every gate is the identity.
  static QlmModel identity(CircuitLayout l);
  /// Angles drawn uniformly from [-pi/2, pi/2).
  static QlmModel random(CircuitLayout l, std::uint64_t seed);
};

ParameterVector random_parameters(int count, std::uint64_t seed);

/// Statevector after running the circuit on |0>^Ny |z>.
Statevector run_circuit(const CircuitLayout& layout, const ParameterVector& params, const BitString& z);

/// Distribution over the output register for input bits z.
Eigen::VectorXd forward(const QlmModel& model, const BitString& z);

/// Sub-network initialization. Nodes of `large_layout` matched (in order) to
/// the embedded image of `small`'s nodes inherit their angles; other nodes
/// touching an embedded qubit start at zero (identity); the rest are drawn
/// from [-pi/2, pi/2) with `seed`. Final Euler triples on embedded qubits are
/// copied.
QlmModel grow_from_subnet(const QlmModel& small, const CircuitLayout& large_layout,
                          std::span<const int> embedding, std::uint64_t seed = 0);

}  // namespace qlm
