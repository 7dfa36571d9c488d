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
#include <random>

#include "qlm/csv.hpp"
#include "qlm/datagen.hpp"
#include "qlm/encoder.hpp"
#include "qlm/serialize.hpp"

namespace qlm {
namespace {

// Plug-in mutual information in nats, counted directly.
double joint_mi(const RawDataset& raw, const EncoderSpec& spec) {
  std::map<std::pair<std::uint64_t, int>, double> pxy;
  std::map<std::uint64_t, double> px;
  std::map<int, double> py;
  const double w = 1.0 / static_cast<double>(raw.size());
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    const std::uint64_t z = encode_value(raw.features.row(i).transpose(), spec).value;
    const int y = raw.labels[static_cast<std::size_t>(i)];
    pxy[{z, y}] += w;
    px[z] += w;
    py[y] += w;
  }
  double mi = 0;
  for (const auto& [k, p] : pxy) mi += p * std::log(p / (px[k.first] * py[k.second]));
  return mi;
}

EncoderSpec unit_spec(int d, std::vector<int> bits) {
  EncoderSpec s;
  s.pca_mean = Eigen::VectorXd::Zero(d);
  s.pca_components = Eigen::MatrixXd::Identity(d, d);
  s.component_min = Eigen::VectorXd::Zero(d);
  s.component_max = Eigen::VectorXd::Ones(d);
  s.bit_allocation = std::move(bits);
  return s;
}

RawDataset xor_data(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  RawDataset raw;
  raw.features.resize(n, 3);
  for (int i = 0; i < n; ++i) {
    const double a = 2 * u(rng), b = u(rng), c = 0.3 * u(rng);
    raw.features.row(i) << a, b, c;
    raw.labels.push_back((a > 0) != (b > 0) ? 1 : 0);
  }
  return raw;
}

TEST(Pca, PerfectlyCorrelatedLine) {
  Eigen::MatrixXd x(5, 2);
  x << 1, 1, 2, 2, 3, 3, -1, -1, 0.5, 0.5;
  const PcaBasis pca = fit_pca(x);
  const double r = 1 / std::sqrt(2.0);
  EXPECT_NEAR(pca.components(0, 0), r, 1e-12);
  EXPECT_NEAR(pca.components(0, 1), r, 1e-12);
  EXPECT_NEAR(pca.explained_variance(1), 0.0, 1e-12);
}

TEST(Pca, IdentityCovarianceEigenvalues) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Eigen::MatrixXd x(10000, 4);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = g(rng);
  const PcaBasis pca = fit_pca(x);
  for (Eigen::Index k = 0; k < 4; ++k) EXPECT_NEAR(pca.explained_variance(k), 1.0, 0.1);
  for (Eigen::Index k = 1; k < 4; ++k) EXPECT_LE(pca.explained_variance(k), pca.explained_variance(k - 1));
}

TEST(Pca, FullReconstruction) {
  const RawDataset raw = generate_two_class({});
  const PcaBasis pca = fit_pca(raw);
  const Eigen::MatrixXd centered = raw.features.rowwise() - pca.mean.transpose();
  const Eigen::MatrixXd back = project(pca, raw.features) * pca.components;
  EXPECT_LT((back - centered).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Pca, ConstantDataIsDegenerate) {
  try {
    fit_pca(Eigen::MatrixXd::Constant(10, 3, 2.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateData);
  }
}

TEST(AllocateBits, InformativeComponentGetsFirstBit) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::MatrixXd proj(400, 3);
  std::vector<int> labels;
  for (int i = 0; i < 400; ++i) {
    const int y = i % 2;
    proj.row(i) << u(rng), y + 0.1 * u(rng), u(rng);
    labels.push_back(y);
  }
  EXPECT_EQ(allocate_bits(proj, labels, 1), (std::vector<int>{0, 1, 0}));
  const auto three = allocate_bits(proj, labels, 3);
  EXPECT_GE(three[1], 1);
  EXPECT_EQ(three[0] + three[1] + three[2], 3);
}

TEST(AllocateBits, IndependentLabelsStillSpendBudget) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::MatrixXd proj(300, 3);
  std::vector<int> labels;
  for (int i = 0; i < 300; ++i) {
    proj.row(i) << u(rng), u(rng), u(rng);
    labels.push_back(static_cast<int>(rng() % 2));
  }
  const auto a = allocate_bits(proj, labels, 2);
  EXPECT_EQ(a[0] + a[1] + a[2], 2);
  EXPECT_EQ(a, allocate_bits(proj, labels, 2));
}

TEST(AllocateBits, BudgetChecks) {
  const Eigen::MatrixXd proj = Eigen::MatrixXd::Random(10, 2);
  const std::vector<int> labels(10, 0);
  EXPECT_THROW(allocate_bits(proj, labels, 0), Error);
  EXPECT_THROW(allocate_bits(proj, labels, 25), Error);
}

TEST(AllocateBits, XorAgainstExhaustiveSearch) {
  const RawDataset raw = xor_data(2000, 4);
  const EncoderSpec greedy = fit_encoder(raw, 2);
  double best = 0;
  for (int a = 0; a <= 2; ++a) {
    for (int b = 0; a + b <= 2; ++b) {
      EncoderSpec s = greedy;
      s.bit_allocation = {a, b, 2 - a - b};
      best = std::max(best, joint_mi(raw, s));
    }
  }
  const double got = joint_mi(raw, greedy);
  EXPECT_LE(got, best + 1e-12);
  // Each component alone carries no label information here, so greedy
  // per-component scoring can miss the (1, 1) split; the gap is recorded.
  RecordProperty("greedy_mi", std::to_string(got));
  RecordProperty("best_mi", std::to_string(best));
  EXPECT_GT(best, 0.5);
}

TEST(AllocateBits, MoreBitsNeverLoseInformation) {
  TwoClassOptions opts;
  opts.seed = 5;
  const RawDataset raw = generate_two_class(opts);
  double prev = 0;
  std::vector<int> prev_alloc(9, 0);
  for (int b = 1; b <= 8; ++b) {
    const EncoderSpec s = fit_encoder(raw, b);
    for (std::size_t i = 0; i < prev_alloc.size(); ++i) EXPECT_GE(s.bit_allocation[i], prev_alloc[i]);
    const double mi = encoded_mutual_information(raw, s);
    EXPECT_NEAR(mi, joint_mi(raw, s), 1e-12);
    EXPECT_GE(mi, prev - 1e-12);
    prev = mi;
    prev_alloc = s.bit_allocation;
  }
}

TEST(EncodeValue, FieldExamples) {
  EXPECT_EQ(encode_value((Eigen::VectorXd(1) << 0.5).finished(), unit_spec(1, {3})).value, 4u);
  EXPECT_EQ(encode_value((Eigen::VectorXd(1) << 1.0).finished(), unit_spec(1, {3})).value, 7u);
  EXPECT_EQ(encode_value((Eigen::VectorXd(1) << 7.0).finished(), unit_spec(1, {3})).value, 7u);
  EXPECT_EQ(encode_value((Eigen::VectorXd(1) << -1.0).finished(), unit_spec(1, {3})).value, 0u);
  const BitString z = encode_value((Eigen::VectorXd(2) << 0.999, 0.25).finished(), unit_spec(2, {0, 2}));
  EXPECT_EQ(z.width, 2);
  EXPECT_EQ(z.value, 1u);
}

TEST(EncodeValue, ComponentZeroHoldsHighBits) {
  const BitString z = encode_value((Eigen::VectorXd(2) << 0.75, 0.0).finished(), unit_spec(2, {1, 2}));
  EXPECT_EQ(z.str(), "100");
}

TEST(EncodeValue, MidpointRoundTrip) {
  TwoClassOptions opts;
  opts.seed = 6;
  const RawDataset raw = generate_two_class(opts);
  const EncoderSpec spec = fit_encoder(raw, 6);
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    const BitString z = encode_value(raw.features.row(i).transpose(), spec);
    EXPECT_EQ(encode_value(decode_midpoint(z, spec), spec), z);
  }
}

TEST(EncodedDataset, CollisionTarget) {
  EncodedDataset d(2);
  d.add(0b01, 0, 1);
  d.add(0b01, 1, 3);
  EXPECT_EQ(d.target(0b01), 1);
  d.add(0b10, 0, 2);
  d.add(0b10, 1, 2);
  EXPECT_EQ(d.target(0b10), 0);
  double total = 0;
  for (const auto& [z, row] : d.counts()) total += d.frequency(z);
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(d.joint_frequency(0b01, 1), 3.0 / 8, 1e-15);
  EXPECT_THROW(d.add(4, 0), Error);
  EXPECT_THROW(d.target(3), Error);
}

TEST(EncodedDataset, FrequenciesNormalizedOnGeneratedData) {
  const RawDataset raw = generate_two_class({});
  const EncodedDataset d = build_encoded_dataset(raw, fit_encoder(raw, 5));
  double total = 0;
  for (const auto& [z, row] : d.counts()) total += d.frequency(z);
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(d.total(), raw.size());
}

TEST(Split, SizesAndDeterminism) {
  const RawDataset raw = generate_two_class({});
  const DatasetSplit a = train_test_split(raw, 0.2, 9), b = train_test_split(raw, 0.2, 9);
  EXPECT_EQ(a.test_rows.size(), 40u);
  EXPECT_EQ(a.train_rows.size(), 160u);
  EXPECT_EQ(a.test_rows, b.test_rows);
  std::vector<int> all = a.train_rows;
  all.insert(all.end(), a.test_rows.begin(), a.test_rows.end());
  std::sort(all.begin(), all.end());
  for (int i = 0; i < 200; ++i) EXPECT_EQ(all[static_cast<std::size_t>(i)], i);
}

TEST(BitEmbedding, SmallCodesAreSubsetsOfLargeCodes) {
  TwoClassOptions opts;
  opts.seed = 7;
  const RawDataset raw = generate_two_class(opts);
  const EncoderSpec small = fit_encoder(raw, 3), large = fit_encoder(raw, 7);
  const std::vector<int> emb = bit_embedding(small, large, 1, 1);
  ASSERT_EQ(emb.size(), 4u);
  EXPECT_EQ(emb[3], 7);
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    const Eigen::VectorXd x = raw.features.row(i).transpose();
    const BitString zs = encode_value(x, small), zl = encode_value(x, large);
    for (int q = 0; q < 3; ++q) EXPECT_EQ(zs.bit(q), zl.bit(emb[static_cast<std::size_t>(q)]));
  }
  EXPECT_THROW(bit_embedding(large, small, 1, 1), Error);
}

TEST(Serialize, EncoderRoundTrip) {
  const RawDataset raw = generate_two_class({});
  EncoderSpec spec = fit_encoder(raw, 4);
  spec.feature_names = {"a", "b", "c", "d", "e", "f", "g", "h", "i"};
  const EncoderSpec back = deserialize_encoder(serialize_encoder(spec));
  EXPECT_EQ(back.pca_components, spec.pca_components);
  EXPECT_EQ(back.component_max, spec.component_max);
  EXPECT_EQ(back.bit_allocation, spec.bit_allocation);
  EXPECT_EQ(back.feature_names, spec.feature_names);
}

TEST(Csv, DatasetRoundTrip) {
  const RawDataset raw = generate_two_class({});
  const std::vector<std::string> names{"p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8", "p9"};
  const LabeledTable back = table_to_dataset(parse_csv(to_csv(dataset_to_table(raw, names, "label"))), "label");
  EXPECT_EQ(back.data.features, raw.features);
  EXPECT_EQ(back.data.labels, raw.labels);
  EXPECT_EQ(back.feature_names, names);
}

TEST(Csv, BadCellIsParseError) {
  try {
    table_to_dataset(parse_csv("a,label\nfoo,1\n"), "label");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
  }
}

}  // namespace
}  // namespace qlm
