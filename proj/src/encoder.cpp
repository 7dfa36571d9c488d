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

#include "qlm/encoder.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "qlm/error.hpp"

namespace qlm {

int RawDataset::num_classes() const {
  int top = -1;
  for (int y : labels) top = std::max(top, y);
  return top + 1;
}

RawDataset RawDataset::subset(std::span<const int> rows) const {
  RawDataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(rows[i]);
    out.labels.push_back(labels[static_cast<std::size_t>(rows[i])]);
  }
  return out;
}

void validate(const RawDataset& raw) {
  require(raw.size() >= 2, "dataset needs at least two samples");
  require(raw.dimension() >= 1, "dataset needs at least one feature");
  require(static_cast<Eigen::Index>(raw.labels.size()) == raw.size(), "label count does not match sample count");
  require(raw.features.allFinite(), "features must be finite");
  for (int y : raw.labels) require(y >= 0, "labels must be non-negative");
}

PcaBasis fit_pca(const RawDataset& raw) {
  validate(raw);
  return fit_pca(raw.features);
}

PcaBasis fit_pca(const Eigen::MatrixXd& features) {
  const Eigen::Index n = features.rows(), d = features.cols();
  require(n >= 2, "PCA needs at least two samples");
  require(features.allFinite(), "features must be finite");
  PcaBasis pca;
  pca.mean = features.colwise().mean().transpose();
  const Eigen::MatrixXd centered = features.rowwise() - pca.mean.transpose();
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  if (!(cov.trace() > std::numeric_limits<double>::min())) {
    fail(ErrorKind::DegenerateData, "all features have zero variance");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) fail(ErrorKind::DegenerateData, "covariance eigendecomposition failed");

  pca.components.resize(d, d);
  pca.explained_variance.resize(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    // Eigen sorts ascending.
    const Eigen::Index src = d - 1 - k;
    Eigen::VectorXd v = eig.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    pca.components.row(k) = v.transpose();
    pca.explained_variance(k) = eig.eigenvalues()(src);
  }
  return pca;
}

Eigen::MatrixXd project(const PcaBasis& pca, const Eigen::MatrixXd& features) {
  require(features.cols() == pca.mean.size(), "feature dimension does not match the PCA basis");
  return (features.rowwise() - pca.mean.transpose()) * pca.components.transpose();
}

std::uint64_t truncate_to_bits(double scaled, int bits) {
  if (bits <= 0) return 0;
  const double s = std::clamp(scaled, 0.0, 1.0);
  const std::uint64_t top = (std::uint64_t{1} << bits) - 1;
  const auto field = static_cast<std::uint64_t>(std::floor(std::ldexp(s, bits)));
  return std::min(field, top);
}

double mutual_information(std::span<const std::uint64_t> codes, std::span<const int> labels) {
  require(codes.size() == labels.size(), "codes and labels differ in length");
  if (codes.empty()) return 0.0;
  std::map<std::pair<std::uint64_t, int>, long> joint;
  std::map<std::uint64_t, long> by_code;
  std::map<int, long> by_label;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    ++joint[{codes[i], labels[i]}];
    ++by_code[codes[i]];
    ++by_label[labels[i]];
  }
  const auto n = static_cast<double>(codes.size());
  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    const double pxy = static_cast<double>(c) / n;
    const double ratio = static_cast<double>(c) * n /
                         (static_cast<double>(by_code[key.first]) * static_cast<double>(by_label[key.second]));
    mi += pxy * std::log(ratio);
  }
  return std::max(mi, 0.0);
}

namespace {

std::vector<std::uint64_t> quantize_column(const Eigen::VectorXd& column, double lo, double hi, int bits) {
  std::vector<std::uint64_t> codes(static_cast<std::size_t>(column.size()));
  const double range = hi - lo;
  for (Eigen::Index i = 0; i < column.size(); ++i) {
    codes[static_cast<std::size_t>(i)] = range > 0 ? truncate_to_bits((column(i) - lo) / range, bits) : 0;
  }
  return codes;
}

}  // namespace

std::vector<int> allocate_bits(const Eigen::MatrixXd& projected, std::span<const int> labels, int total_bits,
                               const BitAllocationOptions& options) {
  require(total_bits >= 1, "total bit budget must be at least 1");
  require(total_bits <= options.max_total_bits,
          "total bit budget " + std::to_string(total_bits) + " exceeds the cap of " +
              std::to_string(options.max_total_bits));
  require(static_cast<Eigen::Index>(labels.size()) == projected.rows(), "label count does not match rows");
  const Eigen::Index d = projected.cols();
  const Eigen::VectorXd lo = projected.colwise().minCoeff();
  const Eigen::VectorXd hi = projected.colwise().maxCoeff();

  std::vector<int> bits(static_cast<std::size_t>(d), 0);
  std::vector<double> current(static_cast<std::size_t>(d), 0.0);
  for (int round = 0; round < total_bits; ++round) {
    Eigen::Index best = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    double best_mi = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (!(hi(i) > lo(i))) continue;
      const auto ui = static_cast<std::size_t>(i);
      const auto codes = quantize_column(projected.col(i), lo(i), hi(i), bits[ui] + 1);
      const double mi = mutual_information(codes, labels);
      const double gain = mi - current[ui];
      if (gain > best_gain) {
        best = i;
        best_gain = gain;
        best_mi = mi;
      }
    }
    if (best < 0) fail(ErrorKind::DegenerateData, "no component has a nonzero range");
    ++bits[static_cast<std::size_t>(best)];
    current[static_cast<std::size_t>(best)] = best_mi;
  }
  return bits;
}

int EncoderSpec::total_bits() const { return std::accumulate(bit_allocation.begin(), bit_allocation.end(), 0); }

void validate(const EncoderSpec& spec) {
  const Eigen::Index d = spec.dimension();
  require(d >= 1, "encoder has no components");
  require(spec.pca_components.rows() == d && spec.pca_components.cols() == d, "PCA components must be d x d");
  require(spec.component_min.size() == d && spec.component_max.size() == d, "component ranges must have d entries");
  require(static_cast<Eigen::Index>(spec.bit_allocation.size()) == d, "bit allocation must have d entries");
  const Eigen::MatrixXd gram = spec.pca_components * spec.pca_components.transpose();
  require((gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-9,
          "PCA components are not orthonormal");
  for (Eigen::Index i = 0; i < d; ++i) {
    const int b = spec.bit_allocation[static_cast<std::size_t>(i)];
    require(b >= 0, "bit allocation entries must be non-negative");
    if (b > 0) require(spec.component_max(i) > spec.component_min(i), "component with bits has an empty range");
  }
  require(spec.total_bits() >= 1 && spec.total_bits() <= BitString::kMaxWidth, "total bit count out of range");
}

EncoderSpec fit_encoder(const RawDataset& raw, int total_bits, const BitAllocationOptions& options) {
  validate(raw);
  const PcaBasis pca = fit_pca(raw.features);
  const Eigen::MatrixXd projected = project(pca, raw.features);
  EncoderSpec spec;
  spec.pca_mean = pca.mean;
  spec.pca_components = pca.components;
  spec.component_min = projected.colwise().minCoeff().transpose();
  spec.component_max = projected.colwise().maxCoeff().transpose();
  spec.bit_allocation = allocate_bits(projected, raw.labels, total_bits, options);
  return spec;
}

Eigen::VectorXd scaled_components(const Eigen::VectorXd& x, const EncoderSpec& spec) {
  require(x.size() == spec.dimension(), "feature vector has " + std::to_string(x.size()) +
                                            " entries, encoder expects " + std::to_string(spec.dimension()));
  require(x.allFinite(), "feature vector must be finite");
  const Eigen::VectorXd p = spec.pca_components * (x - spec.pca_mean);
  Eigen::VectorXd s(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double range = spec.component_max(i) - spec.component_min(i);
    s(i) = range > 0 ? std::clamp((p(i) - spec.component_min(i)) / range, 0.0, 1.0) : 0.5;
  }
  return s;
}

BitString encode_value(const Eigen::VectorXd& x, const EncoderSpec& spec) {
  const Eigen::VectorXd s = scaled_components(x, spec);
  std::uint64_t z = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const int b = spec.bit_allocation[static_cast<std::size_t>(i)];
    if (b == 0) continue;
    z = (z << b) | truncate_to_bits(s(i), b);
  }
  return BitString(z, spec.total_bits());
}

Eigen::VectorXd decode_midpoint(const BitString& z, const EncoderSpec& spec) {
  require(z.width == spec.total_bits(), "bit string width does not match the encoder");
  const Eigen::Index d = spec.dimension();
  Eigen::VectorXd p(d);
  int remaining = z.width;
  for (Eigen::Index i = 0; i < d; ++i) {
    const int b = spec.bit_allocation[static_cast<std::size_t>(i)];
    double scaled = 0.5;
    if (b > 0) {
      remaining -= b;
      const std::uint64_t field = (z.value >> remaining) & ((std::uint64_t{1} << b) - 1);
      scaled = (static_cast<double>(field) + 0.5) / std::ldexp(1.0, b);
    }
    p(i) = spec.component_min(i) + scaled * (spec.component_max(i) - spec.component_min(i));
  }
  return spec.pca_mean + spec.pca_components.transpose() * p;
}

double encoded_mutual_information(const RawDataset& raw, const EncoderSpec& spec) {
  std::vector<std::uint64_t> codes;
  codes.reserve(static_cast<std::size_t>(raw.size()));
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    codes.push_back(encode_value(raw.features.row(i).transpose(), spec).value);
  }
  return mutual_information(codes, raw.labels);
}

void EncodedDataset::add(std::uint64_t z, int label, long count) {
  require(bit_width_ >= 0 && (bit_width_ >= 63 || (z >> bit_width_) == 0), "code exceeds dataset bit width");
  require(label >= 0, "labels must be non-negative");
  require(count >= 0, "counts must be non-negative");
  if (count == 0) return;
  counts_[z][label] += count;
  total_ += count;
}

int EncodedDataset::max_label() const {
  int top = -1;
  for (const auto& [z, row] : counts_) top = std::max(top, row.rbegin()->first);
  return top;
}

long EncodedDataset::count(std::uint64_t z, int label) const {
  const auto it = counts_.find(z);
  if (it == counts_.end()) return 0;
  const auto jt = it->second.find(label);
  return jt == it->second.end() ? 0 : jt->second;
}

double EncodedDataset::frequency(std::uint64_t z) const {
  const auto it = counts_.find(z);
  if (it == counts_.end() || total_ == 0) return 0.0;
  long sum = 0;
  for (const auto& [y, c] : it->second) sum += c;
  return static_cast<double>(sum) / static_cast<double>(total_);
}

double EncodedDataset::joint_frequency(std::uint64_t z, int label) const {
  return total_ == 0 ? 0.0 : static_cast<double>(count(z, label)) / static_cast<double>(total_);
}

int EncodedDataset::target(std::uint64_t z) const {
  const auto it = counts_.find(z);
  require(it != counts_.end(), "code " + std::to_string(z) + " does not occur in the dataset");
  int best = -1;
  long best_count = -1;
  // Labels iterate ascending, so strict > keeps the smallest label on ties.
  for (const auto& [y, c] : it->second) {
    if (c > best_count) {
      best = y;
      best_count = c;
    }
  }
  return best;
}

EncodedDataset build_encoded_dataset(const RawDataset& raw, const EncoderSpec& spec) {
  require(raw.dimension() == spec.dimension(), "dataset has " + std::to_string(raw.dimension()) +
                                                   " features, encoder expects " +
                                                   std::to_string(spec.dimension()));
  require(static_cast<Eigen::Index>(raw.labels.size()) == raw.size(), "label count does not match sample count");
  EncodedDataset data(spec.total_bits());
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    data.add(encode_value(raw.features.row(i).transpose(), spec).value, raw.labels[static_cast<std::size_t>(i)]);
  }
  return data;
}

DatasetSplit train_test_split(const RawDataset& raw, double test_fraction, std::uint64_t seed) {
  require(test_fraction >= 0.0 && test_fraction < 1.0, "test fraction must be in [0, 1)");
  const auto n = static_cast<int>(raw.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const int n_test = std::min(n - 1, static_cast<int>(std::lround(test_fraction * n)));
  DatasetSplit split;
  split.test_rows.assign(order.begin(), order.begin() + n_test);
  split.train_rows.assign(order.begin() + n_test, order.end());
  std::sort(split.test_rows.begin(), split.test_rows.end());
  std::sort(split.train_rows.begin(), split.train_rows.end());
  split.train = raw.subset(split.train_rows);
  split.test = raw.subset(split.test_rows);
  return split;
}

std::vector<int> bit_embedding(const EncoderSpec& small, const EncoderSpec& large, int small_outputs,
                               int large_outputs) {
  if (small.dimension() != large.dimension()) {
    fail(ErrorKind::StructureMismatch, "encoders have different dimensionality");
  }
  if (small_outputs > large_outputs) {
    fail(ErrorKind::StructureMismatch, "large model has fewer output qubits than the small one");
  }
  const int small_bits = small.total_bits(), large_bits = large.total_bits();
  std::vector<int> map(static_cast<std::size_t>(small_bits + small_outputs), -1);
  int small_start = 0, large_start = 0;
  for (Eigen::Index i = 0; i < small.dimension(); ++i) {
    const int bs = small.bit_allocation[static_cast<std::size_t>(i)];
    const int bl = large.bit_allocation[static_cast<std::size_t>(i)];
    if (bs > bl) {
      fail(ErrorKind::StructureMismatch, "component " + std::to_string(i) + " has " + std::to_string(bs) +
                                             " bits in the small encoder but only " + std::to_string(bl) +
                                             " in the large one");
    }
    for (int j = 0; j < bs; ++j) {
      // Bit j of a field (0 = most significant) lives on qubit width - 1 - (start + j).
      map[static_cast<std::size_t>(small_bits - 1 - (small_start + j))] = large_bits - 1 - (large_start + j);
    }
    small_start += bs;
    large_start += bl;
  }
  for (int k = 0; k < small_outputs; ++k) {
    map[static_cast<std::size_t>(small_bits + k)] = large_bits + k;
  }
  return map;
}

}  // namespace qlm
