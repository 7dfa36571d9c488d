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

#include "qlm/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <set>
#include <string>

#include "qlm/error.hpp"
#include "qlm/trainer.hpp"

namespace qlm {

void validate(const Trajectory& trajectory) {
  require(trajectory.length() >= 2, "trajectory needs at least two time points");
  require(static_cast<Eigen::Index>(trajectory.times.size()) == trajectory.length(),
          "trajectory has mismatched times and states");
  require(trajectory.states.allFinite(), "trajectory states must be finite");
  const double dt = trajectory.times[1] - trajectory.times[0];
  require(dt > 0, "trajectory times must increase");
  for (std::size_t n = 1; n < trajectory.times.size(); ++n) {
    require(std::abs((trajectory.times[n] - trajectory.times[n - 1]) - dt) < 1e-9,
            "trajectory time step is not uniform at index " + std::to_string(n));
  }
}

Eigen::VectorXd toy_derivative(ToySystem system, const ToySystemParams& params, const Eigen::VectorXd& x) {
  switch (system) {
    case ToySystem::LinearDecay:
      return -params.decay_rate * x;
    case ToySystem::TwoSpeciesOscillator: {
      require(x.size() == 2, "the two-species oscillator has exactly two components");
      Eigen::VectorXd dx(2);
      dx(0) = params.alpha * x(0) - params.beta * x(0) * x(1);
      dx(1) = params.delta * x(0) * x(1) - params.gamma * x(1);
      return dx;
    }
  }
  return x;
}

double oscillator_invariant(const ToySystemParams& params, const Eigen::VectorXd& x) {
  require(x.size() == 2 && x(0) > 0 && x(1) > 0, "oscillator invariant needs two positive components");
  return params.delta * x(0) - params.gamma * std::log(x(0)) + params.beta * x(1) - params.alpha * std::log(x(1));
}

Eigen::VectorXd rk4_step(ToySystem system, const ToySystemParams& params, const Eigen::VectorXd& x, double dt) {
  const Eigen::VectorXd k1 = toy_derivative(system, params, x);
  const Eigen::VectorXd k2 = toy_derivative(system, params, x + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = toy_derivative(system, params, x + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = toy_derivative(system, params, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::vector<Trajectory> generate_toy_trajectories(const TrajectoryOptions& options) {
  require(options.dt > 0, "dt must be positive");
  require(options.steps >= 1, "steps must be at least 1");
  require(!options.initial_states.empty(), "at least one initial state is required");
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Trajectory> out;
  for (const Eigen::VectorXd& x0 : options.initial_states) {
    require(x0.allFinite(), "initial states must be finite");
    Trajectory traj;
    traj.states.resize(options.steps + 1, x0.size());
    Eigen::VectorXd x = x0;
    if (options.jitter != 0.0) {
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) *= 1.0 + options.jitter * unit(rng);
    }
    traj.times.push_back(0.0);
    traj.states.row(0) = x.transpose();
    for (int n = 1; n <= options.steps; ++n) {
      x = rk4_step(options.system, options.params, x, options.dt);
      if (!x.allFinite()) {
        fail(ErrorKind::Integration, "integration produced a non-finite state at step " + std::to_string(n));
      }
      traj.times.push_back(n * options.dt);
      traj.states.row(n) = x.transpose();
    }
    out.push_back(std::move(traj));
  }
  return out;
}

Eigen::MatrixXd stack_states(const std::vector<Trajectory>& trajectories) {
  require(!trajectories.empty(), "no trajectories");
  Eigen::Index rows = 0;
  const Eigen::Index d = trajectories.front().dimension();
  for (const auto& t : trajectories) {
    require(t.dimension() == d, "trajectories differ in dimension");
    rows += t.length();
  }
  Eigen::MatrixXd all(rows, d);
  Eigen::Index r = 0;
  for (const auto& t : trajectories) {
    all.middleRows(r, t.length()) = t.states;
    r += t.length();
  }
  return all;
}

EncoderSpec fit_state_encoder(const std::vector<Trajectory>& trajectories, int total_bits,
                              const std::optional<std::vector<int>>& allocation) {
  for (const auto& t : trajectories) validate(t);
  require(total_bits >= 1 && total_bits <= CircuitLayout::kMaxQubits, "state bit budget out of range");
  const Eigen::MatrixXd states = stack_states(trajectories);
  const PcaBasis pca = fit_pca(states);
  const Eigen::MatrixXd projected = project(pca, states);
  EncoderSpec spec;
  spec.pca_mean = pca.mean;
  spec.pca_components = pca.components;
  spec.component_min = projected.colwise().minCoeff().transpose();
  spec.component_max = projected.colwise().maxCoeff().transpose();
  const Eigen::Index d = pca.mean.size();
  if (allocation) {
    require(static_cast<Eigen::Index>(allocation->size()) == d, "allocation needs one entry per component");
    spec.bit_allocation = *allocation;
  } else {
    spec.bit_allocation.assign(static_cast<std::size_t>(d), 0);
    for (int round = 0; round < total_bits; ++round) {
      Eigen::Index best = -1;
      double best_score = -1.0;
      for (Eigen::Index i = 0; i < d; ++i) {
        if (!(spec.component_max(i) > spec.component_min(i))) continue;
        const double score =
            pca.explained_variance(i) / std::ldexp(1.0, 2 * spec.bit_allocation[static_cast<std::size_t>(i)]);
        if (score > best_score) {
          best = i;
          best_score = score;
        }
      }
      if (best < 0) fail(ErrorKind::DegenerateData, "all trajectory states are identical");
      ++spec.bit_allocation[static_cast<std::size_t>(best)];
    }
  }
  require(spec.total_bits() == total_bits, "allocation does not sum to the bit budget");
  validate(spec);
  return spec;
}

TransitionDataset build_transition_dataset(const std::vector<Trajectory>& trajectories, const EncoderSpec& spec) {
  TransitionDataset out;
  out.data = EncodedDataset(spec.total_bits());
  for (const auto& t : trajectories) {
    validate(t);
    require(t.dimension() == spec.dimension(), "trajectory dimension does not match the encoder");
    std::uint64_t prev = encode_value(t.states.row(0).transpose(), spec).value;
    for (Eigen::Index n = 1; n < t.length(); ++n) {
      const std::uint64_t next = encode_value(t.states.row(n).transpose(), spec).value;
      out.data.add(prev, static_cast<int>(next));
      ++out.pair_count;
      prev = next;
    }
  }
  for (const auto& [z, row] : out.data.counts()) {
    if (row.size() > 1) ++out.conflicting_inputs;
  }
  return out;
}

std::vector<BitString> rollout(const QlmModel& model, const BitString& z0, int horizon, RolloutMode mode,
                               std::uint64_t seed) {
  require(horizon >= 1, "horizon must be at least 1");
  require(model.task == Task::Dynamics, "rollout needs a dynamics model");
  const int width = model.layout.num_qubits();
  require(z0.width == width, "initial code has " + std::to_string(z0.width) + " bits, model has " +
                                 std::to_string(width) + " qubits");
  std::mt19937_64 rng(seed);
  std::vector<BitString> path{z0};
  for (int step = 0; step < horizon; ++step) {
    const BitString& z = path.back();
    std::uint64_t next = 0;
    if (mode == RolloutMode::Argmax) {
      next = static_cast<std::uint64_t>(predict(model, z));
    } else {
      const Eigen::VectorXd p = forward(model, z);
      std::discrete_distribution<std::uint64_t> dist(p.data(), p.data() + p.size());
      next = dist(rng);
    }
    path.emplace_back(next, width);
  }
  return path;
}

}  // namespace qlm
