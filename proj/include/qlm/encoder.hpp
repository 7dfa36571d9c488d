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

// Compression of real feature vectors into bit strings: PCA rotation,
// per-component min-max scaling, mutual-information bit allocation and
// truncation to b_i bits per component.

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qlm/bitstring.hpp"

namespace qlm {

struct RawDataset {
  Eigen::MatrixXd features;  // n_samples x d
  std::vector<int> labels;

  Eigen::Index size() const { return features.rows(); }
  Eigen::Index dimension() const { return features.cols(); }
  /// 1 + largest label.
  int num_classes() const;
  RawDataset subset(std::span<const int> rows) const;
};

/// Checks finiteness, label range and n >= 2.
void validate(const RawDataset& raw);

struct PcaBasis {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;  // rows are principal directions, descending variance
  Eigen::VectorXd explained_variance;
};

/// Principal components of the sample covariance. Each component's
/// largest-magnitude entry is made positive.
PcaBasis fit_pca(const RawDataset& raw);
PcaBasis fit_pca(const Eigen::MatrixXd& features);

/// Rows of `features` expressed in the principal basis (n x d).
Eigen::MatrixXd project(const PcaBasis& pca, const Eigen::MatrixXd& features);

/// Truncation of a scaled value in [0, 1] to `bits` bits; 1.0 maps to the top field.
std::uint64_t truncate_to_bits(double scaled, int bits);

/// Plug-in mutual information (nats) between discrete codes and labels.
double mutual_information(std::span<const std::uint64_t> codes, std::span<const int> labels);

struct BitAllocationOptions {
  int max_total_bits = 24;
};

/// Greedy allocation of `total_bits` bits over the columns of `projected`.
/// Each round grants one bit to the column whose per-column plug-in MI with
/// the labels grows the most; ties go to the lower index. Columns with zero
/// range never receive bits.
std::vector<int> allocate_bits(const Eigen::MatrixXd& projected, std::span<const int> labels, int total_bits,
                               const BitAllocationOptions& options = {});

struct EncoderSpec {
  Eigen::VectorXd pca_mean;
  Eigen::MatrixXd pca_components;
  Eigen::VectorXd component_min;
  Eigen::VectorXd component_max;
  std::vector<int> bit_allocation;
  /// Optional column names of the raw features, carried for compatibility checks.
  std::vector<std::string> feature_names;

  int total_bits() const;
  Eigen::Index dimension() const { return pca_mean.size(); }
};

/// Checks shapes, orthonormality and that every bit-bearing component has a range.
void validate(const EncoderSpec& spec);

/// PCA + range + bit allocation fitted on `raw`.
EncoderSpec fit_encoder(const RawDataset& raw, int total_bits, const BitAllocationOptions& options = {});

/// Component values scaled to [0, 1] (clamped) for one feature vector.
Eigen::VectorXd scaled_components(const Eigen::VectorXd& x, const EncoderSpec& spec);

/// Bit fields concatenated in component order, each field high bit first.
BitString encode_value(const Eigen::VectorXd& x, const EncoderSpec& spec);

/// Feature vector at the centre of z's cell (components without bits sit at
/// the middle of their range).
Eigen::VectorXd decode_midpoint(const BitString& z, const EncoderSpec& spec);

/// Plug-in MI between the full code z and the labels on `raw`.
double encoded_mutual_information(const RawDataset& raw, const EncoderSpec& spec);

/// Empirical joint counts over (z, y).
class EncodedDataset {
 public:
  explicit EncodedDataset(int bit_width = 0) : bit_width_(bit_width) {}

  void add(std::uint64_t z, int label, long count = 1);

  int bit_width() const { return bit_width_; }
  long total() const { return total_; }
  bool empty() const { return total_ == 0; }
  const std::map<std::uint64_t, std::map<int, long>>& counts() const { return counts_; }
  std::size_t distinct_inputs() const { return counts_.size(); }
  int max_label() const;

  long count(std::uint64_t z, int label) const;
  double frequency(std::uint64_t z) const;
  double joint_frequency(std::uint64_t z, int label) const;
  /// argmax_y f(z, y), ties toward the smallest label.
  int target(std::uint64_t z) const;

 private:
  int bit_width_;
  long total_ = 0;
  std::map<std::uint64_t, std::map<int, long>> counts_;
};

EncodedDataset build_encoded_dataset(const RawDataset& raw, const EncoderSpec& spec);

struct DatasetSplit {
  RawDataset train;
  RawDataset test;
  std::vector<int> train_rows;
  std::vector<int> test_rows;
};

/// Seeded shuffle of the rows, then the first round(n * test_fraction) go to test.
DatasetSplit train_test_split(const RawDataset& raw, double test_fraction, std::uint64_t seed);

/// Qubit map from a coarse encoding to a finer one of the same basis.
/// Input bit j of component i keeps its role; output qubit k of the small
/// register maps to output qubit k of the large one. Requires every
/// component's small bit count to be at most its large bit count.
std::vector<int> bit_embedding(const EncoderSpec& small, const EncoderSpec& large, int small_outputs,
                               int large_outputs);

}  // namespace qlm
