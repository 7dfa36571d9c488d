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

#include <Eigen/Core>

#include "qlm/encoder.hpp"

namespace qlm {

struct LogisticRegressionOptions {
  int iterations = 2000;
  double learning_rate = 0.5;
};

/// Multinomial logistic regression on standardized raw features, fitted by
/// full-batch gradient descent from zero weights.
class LogisticRegression {
 public:
  static LogisticRegression fit(const RawDataset& data, const LogisticRegressionOptions& options = {});

  int predict(const Eigen::VectorXd& x) const;
  double accuracy(const RawDataset& data) const;
  int num_classes() const { return static_cast<int>(weights_.cols()); }

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd scale_;
  Eigen::MatrixXd weights_;  // (d + 1) x classes, last row is the bias
};

}  // namespace qlm
