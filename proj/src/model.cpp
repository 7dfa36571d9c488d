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

#include "qlm/model.hpp"

#include <algorithm>
#include <numbers>
#include <random>
#include <string>

namespace qlm {

namespace {

std::string pair_str(int a, int b) { return "(" + std::to_string(a) + "," + std::to_string(b) + ")"; }

std::vector<std::vector<QubitPair>> brickwork_pairs(int num_qubits, int num_layers) {
  std::vector<std::vector<QubitPair>> layers;
  for (int layer = 0; layer < num_layers; ++layer) {
    std::vector<QubitPair> pairs;
    for (int a = layer % 2; a + 1 < num_qubits; a += 2) pairs.emplace_back(a, a + 1);
    if (!pairs.empty()) layers.push_back(std::move(pairs));
  }
  return layers;
}

void check_embedding(std::span<const int> embedding, int small_qubits, int large_qubits) {
  if (static_cast<int>(embedding.size()) != small_qubits) {
    fail(ErrorKind::StructureMismatch, "embedding has " + std::to_string(embedding.size()) +
                                           " entries, small model has " + std::to_string(small_qubits) +
                                           " qubits");
  }
  std::vector<bool> used(static_cast<std::size_t>(std::max(large_qubits, 0)), false);
  for (int q = 0; q < small_qubits; ++q) {
    const int target = embedding[static_cast<std::size_t>(q)];
    if (target < 0 || target >= large_qubits) {
      fail(ErrorKind::StructureMismatch, "embedding maps qubit " + std::to_string(q) + " to " +
                                             std::to_string(target) + ", outside the large register");
    }
    if (used[static_cast<std::size_t>(target)]) {
      fail(ErrorKind::StructureMismatch,
           "embedding is not injective: qubit " + std::to_string(target) + " is used twice");
    }
    used[static_cast<std::size_t>(target)] = true;
  }
}

void append_euler(std::vector<ParameterizedGate>& out, const std::array<GateKind, 3>& kinds, int qubit,
                  int offset) {
  // Operator product R1 R2 R3: the rightmost factor acts first.
  for (int k = 2; k >= 0; --k) out.push_back({kinds[k], {qubit, qubit}, offset + k});
}

}  // namespace

CircuitLayout::CircuitLayout(int num_input_qubits, int num_output_qubits,
                             const std::vector<std::vector<QubitPair>>& layers, NodeGates gates)
    : num_input_qubits_(num_input_qubits), num_output_qubits_(num_output_qubits), gates_(gates) {
  require(num_input_qubits >= 1, "layout needs at least one input qubit");
  require(num_output_qubits >= 0, "output qubit count must be non-negative");
  const int nq = num_qubits();
  require(nq >= 2, "layout needs at least two qubits for a two-qubit node");
  require(nq <= kMaxQubits, "layout exceeds " + std::to_string(kMaxQubits) + " qubits");
  for (GateKind k : gates_.euler) {
    require(k == GateKind::Rx || k == GateKind::Rz,
            "Euler slot needs a one-qubit rotation, got " + std::string(gate_name(k)));
  }
  for (GateKind k : gates_.interaction) {
    require(k == GateKind::Rxx || k == GateKind::Ryy || k == GateKind::Rzz,
            "interaction slot needs a two-qubit Pauli rotation, got " + std::string(gate_name(k)));
  }

  std::vector<bool> touched(static_cast<std::size_t>(nq), false);
  int offset = 0;
  for (std::size_t li = 0; li < layers.size(); ++li) {
    std::vector<bool> busy(static_cast<std::size_t>(nq), false);
    std::vector<NodeSpec> layer;
    for (const auto& [a, b] : layers[li]) {
      require(a >= 0 && a < nq && b >= 0 && b < nq,
              "node " + pair_str(a, b) + " in layer " + std::to_string(li) + " is out of range");
      require(a != b, "node " + pair_str(a, b) + " acts on a single qubit");
      require(!busy[static_cast<std::size_t>(a)] && !busy[static_cast<std::size_t>(b)],
              "layer " + std::to_string(li) + " reuses a qubit in node " + pair_str(a, b));
      busy[static_cast<std::size_t>(a)] = busy[static_cast<std::size_t>(b)] = true;
      touched[static_cast<std::size_t>(a)] = touched[static_cast<std::size_t>(b)] = true;
      NodeSpec node{a, b, offset};
      offset += kParamsPerNode;
      layer.push_back(node);
      nodes_.push_back(node);
    }
    layers_.push_back(std::move(layer));
  }
  for (int q = 0; q < nq; ++q) {
    require(touched[static_cast<std::size_t>(q)], "qubit " + std::to_string(q) + " is not in any node");
  }

  if (num_output_qubits_ > 0) {
    for (int q = num_input_qubits_; q < nq; ++q) output_qubits_.push_back(q);
  } else {
    for (int q = 0; q < nq; ++q) output_qubits_.push_back(q);
  }

  compiled_.reserve(static_cast<std::size_t>(parameter_count()));
  for (const NodeSpec& node : nodes_) {
    append_euler(compiled_, gates_.euler, node.qubit_a, node.param_offset);
    append_euler(compiled_, gates_.euler, node.qubit_b, node.param_offset + 3);
    for (int k = 0; k < 3; ++k) {
      compiled_.push_back({gates_.interaction[k], {node.qubit_a, node.qubit_b}, node.param_offset + 6 + k});
    }
  }
  for (int q = 0; q < nq; ++q) append_euler(compiled_, gates_.euler, q, final_euler_offset(q));
}

std::vector<std::vector<QubitPair>> CircuitLayout::pairs() const {
  std::vector<std::vector<QubitPair>> out;
  for (const auto& layer : layers_) {
    auto& dst = out.emplace_back();
    for (const auto& node : layer) dst.emplace_back(node.qubit_a, node.qubit_b);
  }
  return out;
}

CircuitLayout build_brickwork_layout(int num_input_qubits, int num_output_qubits, int num_layers) {
  require(num_input_qubits >= 1, "Nx must be at least 1");
  require(num_output_qubits >= 0, "Ny must be non-negative");
  require(num_layers >= 1, "at least one layer is required");
  const int nq = num_input_qubits + num_output_qubits;
  require(nq >= 2, "Nx + Ny must be at least 2 for a two-qubit node");
  return CircuitLayout(num_input_qubits, num_output_qubits, brickwork_pairs(nq, num_layers));
}

CircuitLayout embed_layout(const CircuitLayout& small, std::span<const int> embedding, int num_input_qubits,
                           int num_output_qubits, int extra_layers) {
  const int nq = num_input_qubits + num_output_qubits;
  check_embedding(embedding, small.num_qubits(), nq);
  require(extra_layers >= 0, "extra layer count must be non-negative");
  std::vector<std::vector<QubitPair>> layers;
  for (const auto& layer : small.layers()) {
    auto& dst = layers.emplace_back();
    for (const auto& node : layer) {
      dst.emplace_back(embedding[static_cast<std::size_t>(node.qubit_a)],
                       embedding[static_cast<std::size_t>(node.qubit_b)]);
    }
  }
  for (auto& layer : brickwork_pairs(nq, extra_layers)) layers.push_back(std::move(layer));
  return CircuitLayout(num_input_qubits, num_output_qubits, layers, small.node_gates());
}

QlmModel::QlmModel(CircuitLayout l, ParameterVector p)
    : QlmModel(l, std::move(p), l.num_output_qubits() > 0 ? Task::Classification : Task::Dynamics) {}

QlmModel::QlmModel(CircuitLayout l, ParameterVector p, Task t)
    : layout(std::move(l)), params(std::move(p)), task(t) {
  require(params.size() == layout.parameter_count(),
          "parameter vector has " + std::to_string(params.size()) + " entries, layout needs " +
              std::to_string(layout.parameter_count()));
  require(params.allFinite(), "parameters must be finite");
  require((task == Task::Dynamics) == (layout.num_output_qubits() == 0),
          "dynamics models have no separate output register; classification models need one");
}

QlmModel QlmModel::identity(CircuitLayout l) {
  const int n = l.parameter_count();
  return QlmModel(std::move(l), ParameterVector::Zero(n));
}

QlmModel QlmModel::random(CircuitLayout l, std::uint64_t seed) {
  const int n = l.parameter_count();
  return QlmModel(std::move(l), random_parameters(n, seed));
}

ParameterVector random_parameters(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-std::numbers::pi / 2, std::numbers::pi / 2);
  ParameterVector p(count);
  for (int i = 0; i < count; ++i) p(i) = dist(rng);
  return p;
}

Statevector run_circuit(const CircuitLayout& layout, const ParameterVector& params, const BitString& z) {
  require(z.width == layout.num_input_qubits(),
          "input has " + std::to_string(z.width) + " bits, model expects " +
              std::to_string(layout.num_input_qubits()));
  // Input bits sit on the low qubits, so |0>^Ny |z> has index z.value.
  Statevector state = init_basis_state(layout.num_qubits(), BitString(z.value, layout.num_qubits()));
  for (const ParameterizedGate& g : layout.compiled()) {
    apply_gate(state, Gate{g.kind, g.targets, params(g.param_index)});
  }
  return state;
}

Eigen::VectorXd forward(const QlmModel& model, const BitString& z) {
  const Statevector state = run_circuit(model.layout, model.params, z);
  const auto& out = model.layout.output_qubits();
  return marginal_probabilities(state, std::span<const int>(out));
}

QlmModel grow_from_subnet(const QlmModel& small, const CircuitLayout& large_layout,
                          std::span<const int> embedding, std::uint64_t seed) {
  check_embedding(embedding, small.layout.num_qubits(), large_layout.num_qubits());
  if (!(small.layout.node_gates() == large_layout.node_gates())) {
    fail(ErrorKind::StructureMismatch, "small and large layouts use different node gate kinds");
  }
  auto image = [&](int q) { return embedding[static_cast<std::size_t>(q)]; };

  const auto& small_nodes = small.layout.nodes();
  const auto& large_nodes = large_layout.nodes();
  std::vector<int> match(large_nodes.size(), -1);
  std::vector<bool> reversed(large_nodes.size(), false);
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < small_nodes.size(); ++k) {
    const int a = image(small_nodes[k].qubit_a), b = image(small_nodes[k].qubit_b);
    bool found = false;
    for (; cursor < large_nodes.size(); ++cursor) {
      const auto& n = large_nodes[cursor];
      if ((n.qubit_a == a && n.qubit_b == b) || (n.qubit_a == b && n.qubit_b == a)) {
        match[cursor] = static_cast<int>(k);
        reversed[cursor] = n.qubit_a != a;
        ++cursor;
        found = true;
        break;
      }
    }
    if (!found) {
      fail(ErrorKind::StructureMismatch,
           "small node " + std::to_string(k) + " on " +
               pair_str(small_nodes[k].qubit_a, small_nodes[k].qubit_b) + " (embedded as " + pair_str(a, b) +
               ") has no matching node in the large layout");
    }
  }

  std::vector<bool> embedded(static_cast<std::size_t>(large_layout.num_qubits()), false);
  for (int q : embedding) embedded[static_cast<std::size_t>(q)] = true;

  ParameterVector params = random_parameters(large_layout.parameter_count(), seed);
  constexpr int kNode = CircuitLayout::kParamsPerNode;
  for (std::size_t j = 0; j < large_nodes.size(); ++j) {
    const int dst = large_nodes[j].param_offset;
    if (match[j] >= 0) {
      const int src = small_nodes[static_cast<std::size_t>(match[j])].param_offset;
      params.segment(dst, kNode) = small.params.segment(src, kNode);
      if (reversed[j]) {
        params.segment(dst, 3) = small.params.segment(src + 3, 3);
        params.segment(dst + 3, 3) = small.params.segment(src, 3);
      }
    } else if (embedded[static_cast<std::size_t>(large_nodes[j].qubit_a)] ||
               embedded[static_cast<std::size_t>(large_nodes[j].qubit_b)]) {
      params.segment(dst, kNode).setZero();
    }
  }
  for (int q = 0; q < small.layout.num_qubits(); ++q) {
    params.segment(large_layout.final_euler_offset(image(q)), 3) =
        small.params.segment(small.layout.final_euler_offset(q), 3);
  }
  return QlmModel(large_layout, std::move(params));
}

}  // namespace qlm
