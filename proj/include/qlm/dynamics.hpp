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

// Learning discrete time evolution |z(t_n)> -> |z(t_{n+1})> with a
// same-width model (no separate output register).

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

#include "qlm/encoder.hpp"
#include "qlm/model.hpp"

namespace qlm {

struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXd states;  // one row per time point

  Eigen::Index length() const { return states.rows(); }
  Eigen::Index dimension() const { return states.cols(); }
};

/// At least two points, uniform spacing (1e-9), finite states.
void validate(const Trajectory& trajectory);

enum class ToySystem { LinearDecay, TwoSpeciesOscillator };

struct ToySystemParams {
  /// dx_i/dt = -decay_rate * x_i
  double decay_rate = 1.0;
  /// Lotka-Volterra: dx/dt = alpha x - beta x y, dy/dt = delta x y - gamma y
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double delta = 1.0;
};

Eigen::VectorXd toy_derivative(ToySystem system, const ToySystemParams& params, const Eigen::VectorXd& x);

/// Conserved quantity of the oscillator: delta x - gamma ln x + beta y - alpha ln y.
double oscillator_invariant(const ToySystemParams& params, const Eigen::VectorXd& x);

/// One classical fourth-order Runge-Kutta step.
Eigen::VectorXd rk4_step(ToySystem system, const ToySystemParams& params, const Eigen::VectorXd& x, double dt);

struct TrajectoryOptions {
  ToySystem system = ToySystem::LinearDecay;
  ToySystemParams params;
  std::vector<Eigen::VectorXd> initial_states;
  int steps = 10;
  double dt = 0.1;
  /// Each initial component is scaled by (1 + jitter * u), u ~ U[-1, 1) from `seed`.
  double jitter = 0.0;
  std::uint64_t seed = 0;
};

std::vector<Trajectory> generate_toy_trajectories(const TrajectoryOptions& options);

/// All states of all trajectories stacked row-wise.
Eigen::MatrixXd stack_states(const std::vector<Trajectory>& trajectories);

/// Shared state encoder fitted on the union of all states. Without an
/// explicit allocation, bits go one at a time to the component with the
/// largest remaining quantization variance (variance / 4^b).
EncoderSpec fit_state_encoder(const std::vector<Trajectory>& trajectories, int total_bits,
                              const std::optional<std::vector<int>>& allocation = std::nullopt);

struct TransitionDataset {
  EncodedDataset data;  // label = integer value of the successor code
  long pair_count = 0;
  std::size_t conflicting_inputs = 0;  // distinct z with more than one successor

  double conflict_fraction() const {
    return data.distinct_inputs() == 0 ? 0.0
                                       : static_cast<double>(conflicting_inputs) /
                                             static_cast<double>(data.distinct_inputs());
  }
};

TransitionDataset build_transition_dataset(const std::vector<Trajectory>& trajectories, const EncoderSpec& spec);

enum class RolloutMode { Argmax, Sampled };

/// z0 followed by `horizon` predicted codes.
std::vector<BitString> rollout(const QlmModel& model, const BitString& z0, int horizon,
                               RolloutMode mode = RolloutMode::Argmax, std::uint64_t seed = 0);

}  // namespace qlm
