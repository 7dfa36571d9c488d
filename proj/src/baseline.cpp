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

#include "qlm/baseline.hpp"

#include <cmath>

#include "qlm/error.hpp"

namespace qlm {

namespace {

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd p = logits.colwise() - logits.rowwise().maxCoeff();
  p = p.array().exp();
  return p.array().colwise() / p.rowwise().sum().array();
}

}  // namespace

LogisticRegression LogisticRegression::fit(const RawDataset& data, const LogisticRegressionOptions& options) {
  validate(data);
  require(options.iterations >= 1 && options.learning_rate > 0, "invalid logistic regression options");
  const Eigen::Index n = data.size(), d = data.dimension();
  const int classes = std::max(2, data.num_classes());

  LogisticRegression model;
  model.mean_ = data.features.colwise().mean().transpose();
  const Eigen::MatrixXd centered = data.features.rowwise() - model.mean_.transpose();
  model.scale_ = (centered.colwise().squaredNorm() / static_cast<double>(n)).cwiseSqrt().transpose();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (!(model.scale_(j) > 0)) model.scale_(j) = 1.0;
  }

  Eigen::MatrixXd x(n, d + 1);
  x.leftCols(d) = centered.array().rowwise() / model.scale_.transpose().array();
  x.col(d).setOnes();
  Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(n, classes);
  for (Eigen::Index i = 0; i < n; ++i) onehot(i, data.labels[static_cast<std::size_t>(i)]) = 1.0;

  model.weights_ = Eigen::MatrixXd::Zero(d + 1, classes);
  for (int it = 0; it < options.iterations; ++it) {
    const Eigen::MatrixXd grad = x.transpose() * (softmax_rows(x * model.weights_) - onehot) / static_cast<double>(n);
    model.weights_ -= options.learning_rate * grad;
  }
  return model;
}

int LogisticRegression::predict(const Eigen::VectorXd& x) const {
  require(x.size() == mean_.size(), "feature vector has the wrong dimension");
  Eigen::VectorXd row(x.size() + 1);
  row.head(x.size()) = (x - mean_).cwiseQuotient(scale_);
  row(x.size()) = 1.0;
  const Eigen::VectorXd logits = weights_.transpose() * row;
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < logits.size(); ++k) {
    if (logits(k) > logits(best)) best = k;
  }
  return static_cast<int>(best);
}

double LogisticRegression::accuracy(const RawDataset& data) const {
  if (data.size() == 0) return 0.0;
  long correct = 0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (predict(data.features.row(i).transpose()) == data.labels[static_cast<std::size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace qlm
