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

// Exact coordinate-update training.
//
// Every angle enters the circuit through exactly one gate exp(-i t P), so
// the loss restricted to that angle is a frequency-2 sinusoid
//   L(t) = c + p cos 2(t - t0) + q sin 2(t - t0).
// Three evaluations at t0 and t0 +/- pi/4 determine (c, p, q) exactly and the
// restricted minimum t0 + atan2(-q, -p) / 2 is taken in one jump.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "qlm/encoder.hpp"
#include "qlm/model.hpp"

namespace qlm {

struct LossEvaluation {
  double loss = 1.0;
  /// P_{C(z),z} for every z present in the data.
  std::map<std::uint64_t, double> success_probability;
};

/// 1 - sum_z f(z) P_{C(z),z}, from exact output probabilities.
LossEvaluation loss(const QlmModel& model, const EncodedDataset& data);
double loss_value(const QlmModel& model, const EncodedDataset& data);

/// Shot-based estimate of the same loss: `shots` samples per distinct z.
double sampled_loss(const QlmModel& model, const EncodedDataset& data, long shots, std::uint64_t seed);

struct SinusoidFit {
  double origin = 0;  // t0
  double offset = 0;  // c
  double cos_coeff = 0;  // p
  double sin_coeff = 0;  // q

  double amplitude() const;
  double predict(double angle) const;
  double argmin() const;
  double min_value() const { return offset - amplitude(); }
};

/// Three-point fit of the loss as a function of parameter `index`.
/// `loss_at_origin` skips the evaluation at the current angle when known.
SinusoidFit fit_coordinate(const QlmModel& model, const EncodedDataset& data, int index,
                           std::optional<double> loss_at_origin = std::nullopt);

struct CoordinateUpdate {
  double angle = 0;
  double loss = 0;
  double previous_loss = 0;
  bool flat = false;
};

/// Exact minimization along one coordinate. Coordinates whose sinusoid
/// amplitude is below `flat_tolerance` are left unchanged.
CoordinateUpdate coordinate_update(const QlmModel& model, const EncodedDataset& data, int index,
                                   double flat_tolerance = 1e-12,
                                   std::optional<double> loss_at_origin = std::nullopt);

/// Most probable output for z, ties toward the smaller value.
int predict(const QlmModel& model, const BitString& z);

/// Fraction of samples (per-sample labels) equal to the model's prediction.
double accuracy(const QlmModel& model, const EncodedDataset& data);

enum class SweepOrder { Sequential, RandomPermutation };

struct TrainConfig {
  int max_epochs = 200;
  SweepOrder order = SweepOrder::RandomPermutation;
  double epsilon = 1e-6;
  double flat_tolerance = 1e-12;
  std::uint64_t seed = 0;
  /// 0 trains on exact probabilities; otherwise every loss is a shot estimate.
  long shots = 0;
};

void validate(const TrainConfig& config);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0;
  double train_accuracy = 0;
  std::optional<double> test_accuracy;
  double seconds = 0;
};

struct TrainReport {
  double initial_loss = 0;
  std::vector<double> loss_trace;  // after each coordinate update
  std::vector<EpochRecord> epochs;
  bool converged = false;
  double final_loss() const { return loss_trace.empty() ? initial_loss : loss_trace.back(); }
};

struct TrainResult {
  QlmModel model;
  TrainReport report;
};

TrainResult train(QlmModel model, const EncodedDataset& train_data, const EncodedDataset* test_data,
                  const TrainConfig& config);

struct GrowthStage {
  CircuitLayout layout;
  std::vector<int> embedding;  // previous stage qubit -> this stage qubit
  EncodedDataset train_data;
  std::optional<EncodedDataset> test_data;
};

/// Trains `initial` on stage 0's data, then grows into each later stage's
/// layout by sub-network initialization and trains again. Stage 0's layout
/// and embedding are ignored.
std::vector<TrainResult> grow_and_train(const QlmModel& initial, const std::vector<GrowthStage>& schedule,
                                        const TrainConfig& config);

}  // namespace qlm
