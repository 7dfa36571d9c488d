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

#include "qlm/trainer.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "qlm/error.hpp"

namespace qlm {

namespace {

void check_compatible(const QlmModel& model, const EncodedDataset& data) {
  require(data.bit_width() == model.layout.num_input_qubits(),
          "dataset codes have " + std::to_string(data.bit_width()) + " bits, model has " +
              std::to_string(model.layout.num_input_qubits()) + " input qubits");
  const int width = model.layout.output_width();
  if (data.max_label() >= (1 << width)) {
    fail(ErrorKind::Configuration, "label " + std::to_string(data.max_label()) + " does not fit in " +
                                       std::to_string(width) + " output qubits");
  }
}

double success_probability(const QlmModel& model, int width, std::uint64_t z, int target) {
  const Eigen::VectorXd p = forward(model, BitString(z, width));
  return p(target);
}

// Per-evaluation seeds for shot-based training.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (counter + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

LossEvaluation loss(const QlmModel& model, const EncodedDataset& data) {
  check_compatible(model, data);
  LossEvaluation out;
  if (data.empty()) return out;
  const int width = data.bit_width();
  double hit = 0.0;
  for (const auto& [z, row] : data.counts()) {
    const double p = success_probability(model, width, z, data.target(z));
    out.success_probability[z] = p;
    hit += data.frequency(z) * p;
  }
  out.loss = 1.0 - hit;
  return out;
}

double loss_value(const QlmModel& model, const EncodedDataset& data) { return loss(model, data).loss; }

double sampled_loss(const QlmModel& model, const EncodedDataset& data, long shots, std::uint64_t seed) {
  check_compatible(model, data);
  require(shots >= 1, "shots must be at least 1");
  const int width = data.bit_width();
  const auto& out = model.layout.output_qubits();
  double hit = 0.0;
  std::uint64_t k = 0;
  for (const auto& [z, row] : data.counts()) {
    const Statevector state = run_circuit(model.layout, model.params, BitString(z, width));
    const auto hist = sample(state, std::span<const int>(out), shots, mix_seed(seed, k++));
    const auto it = hist.find(BitString(static_cast<std::uint64_t>(data.target(z)), model.layout.output_width()).str());
    const double p = it == hist.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(shots);
    hit += data.frequency(z) * p;
  }
  return 1.0 - hit;
}

double SinusoidFit::amplitude() const { return std::hypot(cos_coeff, sin_coeff); }

double SinusoidFit::predict(double angle) const {
  const double x = 2.0 * (angle - origin);
  return offset + cos_coeff * std::cos(x) + sin_coeff * std::sin(x);
}

double SinusoidFit::argmin() const { return origin + 0.5 * std::atan2(-sin_coeff, -cos_coeff); }

SinusoidFit fit_coordinate(const QlmModel& model, const EncodedDataset& data, int index,
                           std::optional<double> loss_at_origin) {
  require(index >= 0 && index < model.params.size(),
          "parameter index " + std::to_string(index) + " out of range");
  constexpr double kShift = std::numbers::pi / 4;
  QlmModel probe = model;
  const double origin = model.params(index);
  const double at_origin = loss_at_origin ? *loss_at_origin : loss_value(model, data);
  probe.params(index) = origin + kShift;
  const double plus = loss_value(probe, data);
  probe.params(index) = origin - kShift;
  const double minus = loss_value(probe, data);

  SinusoidFit fit;
  fit.origin = origin;
  fit.offset = 0.5 * (plus + minus);
  fit.cos_coeff = at_origin - fit.offset;
  fit.sin_coeff = 0.5 * (plus - minus);
  return fit;
}

CoordinateUpdate coordinate_update(const QlmModel& model, const EncodedDataset& data, int index,
                                   double flat_tolerance, std::optional<double> loss_at_origin) {
  const SinusoidFit fit = fit_coordinate(model, data, index, loss_at_origin);
  CoordinateUpdate upd;
  upd.previous_loss = fit.offset + fit.cos_coeff;
  if (fit.amplitude() < flat_tolerance) {
    upd.angle = fit.origin;
    upd.loss = upd.previous_loss;
    upd.flat = true;
    return upd;
  }
  upd.angle = fit.argmin();
  upd.loss = std::min(fit.min_value(), upd.previous_loss);
  return upd;
}

int predict(const QlmModel& model, const BitString& z) {
  const Eigen::VectorXd p = forward(model, z);
  int best = 0;
  for (Eigen::Index j = 1; j < p.size(); ++j) {
    if (p(j) > p(best)) best = static_cast<int>(j);
  }
  return best;
}

double accuracy(const QlmModel& model, const EncodedDataset& data) {
  check_compatible(model, data);
  if (data.empty()) return 0.0;
  long correct = 0;
  for (const auto& [z, row] : data.counts()) {
    const int guess = predict(model, BitString(z, data.bit_width()));
    const auto it = row.find(guess);
    if (it != row.end()) correct += it->second;
  }
  return static_cast<double>(correct) / static_cast<double>(data.total());
}

void validate(const TrainConfig& config) {
  require(config.max_epochs >= 1, "max_epochs must be at least 1");
  require(config.epsilon > 0, "epsilon must be positive");
  require(config.flat_tolerance > 0, "flat tolerance must be positive");
  require(config.shots >= 0, "shots must be non-negative");
}

TrainResult train(QlmModel model, const EncodedDataset& train_data, const EncodedDataset* test_data,
                  const TrainConfig& config) {
  validate(config);
  require(!train_data.empty(), "training set is empty");
  check_compatible(model, train_data);
  if (test_data != nullptr && !test_data->empty()) check_compatible(model, *test_data);

  std::uint64_t evaluations = 0;
  auto evaluate = [&](const QlmModel& m) {
    return config.shots > 0 ? sampled_loss(m, train_data, config.shots, mix_seed(config.seed, evaluations++))
                            : loss_value(m, train_data);
  };

  TrainReport report;
  double current = evaluate(model);
  report.initial_loss = current;

  const int n = static_cast<int>(model.params.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    const double epoch_start = current;
    if (config.order == SweepOrder::RandomPermutation) std::shuffle(order.begin(), order.end(), rng);
    for (int index : order) {
      if (config.shots > 0) {
        // Shot noise breaks the exact-update guarantee; accept the fitted jump as is.
        constexpr double kShift = std::numbers::pi / 4;
        QlmModel probe = model;
        const double origin = model.params(index);
        probe.params(index) = origin + kShift;
        const double plus = evaluate(probe);
        probe.params(index) = origin - kShift;
        const double minus = evaluate(probe);
        SinusoidFit fit{origin, 0.5 * (plus + minus), current - 0.5 * (plus + minus), 0.5 * (plus - minus)};
        if (fit.amplitude() >= config.flat_tolerance) {
          model.params(index) = fit.argmin();
          current = fit.min_value();
        }
      } else {
        const CoordinateUpdate upd = coordinate_update(model, train_data, index, config.flat_tolerance, current);
        model.params(index) = upd.angle;
        current = upd.loss;
      }
      report.loss_trace.push_back(current);
    }
    // Fitted minima carry rounding error; restart each epoch from a direct evaluation.
    if (config.shots == 0) current = loss_value(model, train_data);
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = current;
    rec.train_accuracy = accuracy(model, train_data);
    if (test_data != nullptr && !test_data->empty()) rec.test_accuracy = accuracy(model, *test_data);
    rec.seconds = elapsed;
    report.epochs.push_back(rec);

    if (epoch_start - current < config.epsilon) {
      report.converged = true;
      break;
    }
  }
  return TrainResult{std::move(model), std::move(report)};
}

std::vector<TrainResult> grow_and_train(const QlmModel& initial, const std::vector<GrowthStage>& schedule,
                                        const TrainConfig& config) {
  require(!schedule.empty(), "growth schedule is empty");
  std::vector<TrainResult> results;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const GrowthStage& stage = schedule[k];
    QlmModel start = k == 0 ? initial
                            : grow_from_subnet(results.back().model, stage.layout, stage.embedding,
                                               config.seed + k);
    TrainConfig stage_config = config;
    stage_config.seed = config.seed + k;
    const EncodedDataset* test = stage.test_data ? &*stage.test_data : nullptr;
    results.push_back(train(std::move(start), stage.train_data, test, stage_config));
  }
  return results;
}

}  // namespace qlm
