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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "qlm/csv.hpp"
#include "qlm/dynamics.hpp"
#include "qlm/trainer.hpp"

namespace qlm {
namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

std::vector<Trajectory> decay(std::vector<double> x0, int steps, double dt) {
  TrajectoryOptions o;
  for (double x : x0) o.initial_states.push_back(vec({x}));
  o.steps = steps;
  o.dt = dt;
  return generate_toy_trajectories(o);
}

TEST(Rk4, LinearDecayOneStep) {
  const auto t = decay({1.0}, 1, 0.1);
  ASSERT_EQ(t[0].length(), 2);
  EXPECT_NEAR(t[0].states(1, 0), std::exp(-0.1), 1e-6);
  EXPECT_NEAR(t[0].states(1, 0), 0.904837, 1e-6);
  EXPECT_DOUBLE_EQ(t[0].times[1], 0.1);
}

TEST(Rk4, ZeroStaysZero) {
  const auto t = decay({0.0}, 20, 0.1);
  EXPECT_EQ(t[0].states.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Rk4, OscillatorConservesInvariant) {
  TrajectoryOptions o;
  o.system = ToySystem::TwoSpeciesOscillator;
  o.params = {1.0, 1.1, 0.4, 0.4, 0.1};
  o.initial_states = {vec({10.0, 5.0}), vec({2.0, 1.0})};
  o.steps = 100;
  o.dt = 0.01;
  for (const auto& t : generate_toy_trajectories(o)) {
    const double v0 = oscillator_invariant(o.params, t.states.row(0).transpose());
    for (Eigen::Index k = 1; k < t.length(); ++k) {
      EXPECT_NEAR(oscillator_invariant(o.params, t.states.row(k).transpose()), v0, 1e-6);
    }
  }
}

TEST(Rk4, BlowUpIsIntegrationError) {
  TrajectoryOptions o;
  o.params.decay_rate = -1e3;
  o.initial_states = {vec({1.0})};
  o.steps = 200;
  o.dt = 1.0;
  try {
    generate_toy_trajectories(o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Integration);
  }
}

TEST(Transitions, PairCount) {
  const auto trajs = decay({1.0, 0.5, 2.0}, 2, 0.3);  // three points each
  const EncoderSpec spec = fit_state_encoder(trajs, 3);
  const TransitionDataset t = build_transition_dataset(trajs, spec);
  EXPECT_EQ(t.pair_count, 6);
  EXPECT_EQ(t.data.total(), 6);
}

TEST(Transitions, ConstantTrajectoryIsFixedPoint) {
  auto trajs = decay({1.0, 0.2}, 10, 0.1);
  Trajectory flat;
  flat.times = {0, 1, 2, 3};
  flat.states = Eigen::MatrixXd::Constant(4, 1, 0.6);
  const EncoderSpec spec = fit_state_encoder(trajs, 3);
  const TransitionDataset t = build_transition_dataset({flat}, spec);
  ASSERT_EQ(t.data.distinct_inputs(), 1u);
  const auto& [z, row] = *t.data.counts().begin();
  EXPECT_EQ(row.size(), 1u);
  EXPECT_EQ(static_cast<std::uint64_t>(row.begin()->first), z);
  EXPECT_EQ(t.conflicting_inputs, 0u);
}

TEST(Transitions, ConflictCountMatchesEnumeration) {
  TrajectoryOptions o;
  o.system = ToySystem::TwoSpeciesOscillator;
  o.params = {1.0, 1.1, 0.4, 0.4, 0.1};
  o.initial_states = {vec({10.0, 5.0}), vec({6.0, 3.0}), vec({3.0, 8.0})};
  o.steps = 300;
  o.dt = 0.05;
  const auto trajs = generate_toy_trajectories(o);
  const EncoderSpec spec = fit_state_encoder(trajs, 4);
  const TransitionDataset t = build_transition_dataset(trajs, spec);
  std::map<std::uint64_t, std::set<std::uint64_t>> successors;
  long pairs = 0;
  for (const auto& tr : trajs) {
    for (Eigen::Index k = 0; k + 1 < tr.length(); ++k) {
      successors[encode_value(tr.states.row(k).transpose(), spec).value].insert(
          encode_value(tr.states.row(k + 1).transpose(), spec).value);
      ++pairs;
    }
  }
  std::size_t conflicts = 0;
  for (const auto& [z, s] : successors) conflicts += s.size() > 1 ? 1 : 0;
  EXPECT_EQ(t.pair_count, pairs);
  EXPECT_EQ(t.conflicting_inputs, conflicts);
  EXPECT_EQ(t.data.distinct_inputs(), successors.size());
  EXPECT_GT(conflicts, 0u);
  EXPECT_DOUBLE_EQ(t.conflict_fraction(), static_cast<double>(conflicts) / static_cast<double>(successors.size()));
}

TEST(StateEncoder, HonoursExplicitAllocation) {
  TrajectoryOptions o;
  o.system = ToySystem::TwoSpeciesOscillator;
  o.initial_states = {vec({2.0, 1.0})};
  o.steps = 50;
  const auto trajs = generate_toy_trajectories(o);
  const EncoderSpec spec = fit_state_encoder(trajs, 3, std::vector<int>{1, 2});
  EXPECT_EQ(spec.bit_allocation, (std::vector<int>{1, 2}));
  EXPECT_EQ(fit_state_encoder(trajs, 5).total_bits(), 5);
  EXPECT_THROW(fit_state_encoder(trajs, 3, std::vector<int>{1, 1}), Error);
}

TEST(Rollout, IdentityModelHoldsState) {
  const QlmModel m = QlmModel::identity(build_brickwork_layout(3, 0, 2));
  const auto path = rollout(m, BitString::parse("101"), 5);
  ASSERT_EQ(path.size(), 6u);
  for (const auto& z : path) EXPECT_EQ(z.str(), "101");
}

TEST(Rollout, DeterministicAndSeeded) {
  const QlmModel m = QlmModel::random(build_brickwork_layout(3, 0, 2), 4);
  const BitString z0 = BitString::parse("011");
  EXPECT_EQ(rollout(m, z0, 10), rollout(m, z0, 10));
  EXPECT_EQ(rollout(m, z0, 10, RolloutMode::Sampled, 7), rollout(m, z0, 10, RolloutMode::Sampled, 7));
  EXPECT_THROW(rollout(m, BitString::parse("01"), 3), Error);
  EXPECT_THROW(rollout(QlmModel::identity(build_brickwork_layout(2, 1, 2)), BitString::parse("01"), 3), Error);
}

TEST(Rollout, FixedPointConsistency) {
  // Wherever the model puts more than half its mass on z itself, argmax
  // rollout must stay at z.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ParameterVector p = random_parameters(build_brickwork_layout(2, 0, 1).parameter_count(), seed) * 0.2;
    const QlmModel m(build_brickwork_layout(2, 0, 1), p);
    for (std::uint64_t z = 0; z < 4; ++z) {
      if (forward(m, BitString(z, 2))(static_cast<Eigen::Index>(z)) > 0.5) {
        for (const auto& s : rollout(m, BitString(z, 2), 4)) EXPECT_EQ(s.value, z);
      }
    }
  }
}

TEST(Csv, TrajectoryRoundTrip) {
  const auto trajs = decay({1.0, 2.0}, 5, 0.2);
  const auto back = table_to_trajectories(parse_csv(to_csv(trajectories_to_table(trajs))));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].states, trajs[1].states);
  EXPECT_EQ(back[1].times, trajs[1].times);
}

TEST(Csv, SingleTrajectoryWithoutIdColumn) {
  const auto back = table_to_trajectories(parse_csv("t,x1\n0,1\n0.1,0.9\n"));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].length(), 2);
}

}  // namespace
}  // namespace qlm
