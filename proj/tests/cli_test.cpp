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

#include <json.hpp>

#include <filesystem>
#include <sstream>

#include "../tools/cli.hpp"
#include "qlm/csv.hpp"
#include "qlm/datagen.hpp"
#include "qlm/serialize.hpp"

namespace qlm {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("qlm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }
  std::string dir(const std::string& name) const { return (root_ / name).string(); }
  json read_json(const std::string& path) const { return json::parse(read_text_file(path)); }

  fs::path root_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, GenDataDefaultsAndDeterminism) {
  ASSERT_EQ(run({"gen-data", "--out", dir("a"), "--seed", "3"}), 0) << err_.str();
  ASSERT_EQ(run({"gen-data", "--out", dir("b"), "--seed", "3"}), 0);
  const CsvTable t = read_csv(dir("a") + "/data.csv");
  EXPECT_EQ(t.rows.size(), 200u);
  EXPECT_EQ(t.header.size(), 10u);
  EXPECT_EQ(t.header.back(), "label");
  EXPECT_EQ(read_text_file(dir("a") + "/data.csv"), read_text_file(dir("b") + "/data.csv"));
  EXPECT_EQ(read_json(dir("a") + "/resolved_config.json")["command"], "gen-data");
}

TEST_F(CliTest, ClassificationPipeline) {
  ASSERT_EQ(run({"gen-data", "--out", dir("data"), "--seed", "1"}), 0);
  ASSERT_EQ(run({"encode", "--data", dir("data") + "/data.csv", "--bits", "3", "--out", dir("run"), "--seed", "1"}), 0)
      << err_.str();
  for (const char* f : {"encoder.json", "train.csv", "test.csv", "encoded_train.csv", "summary.json", "run.json"}) {
    EXPECT_TRUE(fs::exists(dir("run") + "/" + f)) << f;
  }
  ASSERT_EQ(run({"train", "--run", dir("run"), "--layers", "4", "--epochs", "5", "--seed", "1", "--out", dir("t")}), 0)
      << err_.str();
  const json summary = read_json(dir("t") + "/summary.json");
  EXPECT_TRUE(summary["test_accuracy"].is_number());
  EXPECT_EQ(summary["num_qubits"], 4);
  const CsvTable trace = read_csv(dir("t") + "/loss_trace.csv");
  EXPECT_EQ(trace.header, (std::vector<std::string>{"update_index", "loss"}));
  const CsvTable epochs = read_csv(dir("t") + "/epochs.csv");
  EXPECT_EQ(epochs.header, (std::vector<std::string>{"epoch", "train_acc", "test_acc", "seconds"}));

  ASSERT_EQ(run({"eval", "--model", dir("t") + "/model.json", "--data", dir("run") + "/test.csv", "--out", dir("e")}), 0)
      << err_.str();
  EXPECT_DOUBLE_EQ(read_json(dir("e") + "/eval.json")["accuracy"].get<double>(), summary["test_accuracy"].get<double>());

  ASSERT_EQ(run({"baseline", "--run", dir("run"), "--model", dir("t") + "/model.json", "--out", dir("b")}), 0)
      << err_.str();
  const json base = read_json(dir("b") + "/baseline.json");
  EXPECT_TRUE(base.contains("logistic_regression_test_accuracy"));
  EXPECT_TRUE(base.contains("qlm_test_accuracy"));

  ASSERT_EQ(run({"grow", "--model", dir("t") + "/model.json", "--run", dir("run"), "--bits", "5", "--epochs", "2",
                 "--out", dir("g")}),
            0)
      << err_.str();
  const json grown = read_json(dir("g") + "/summary.json");
  EXPECT_EQ(grown["num_qubits"], 6);
}

TEST_F(CliTest, TrainIsReproducibleFromRecordedConfig) {
  ASSERT_EQ(run({"gen-data", "--out", dir("data")}), 0);
  ASSERT_EQ(run({"encode", "--data", dir("data") + "/data.csv", "--out", dir("run")}), 0);
  ASSERT_EQ(run({"train", "--run", dir("run"), "--epochs", "3", "--seed", "4", "--out", dir("t1")}), 0);
  json cfg = read_json(dir("t1") + "/resolved_config.json");
  cfg["out"] = dir("t2");
  write_text_file(dir("cfg.json"), cfg.dump());
  ASSERT_EQ(run({"train", "--config", dir("cfg.json")}), 0) << err_.str();
  EXPECT_EQ(read_text_file(dir("t1") + "/model.json"), read_text_file(dir("t2") + "/model.json"));
  EXPECT_EQ(read_text_file(dir("t1") + "/loss_trace.csv"), read_text_file(dir("t2") + "/loss_trace.csv"));
}

TEST_F(CliTest, OutputRootFromEnvironment) {
  ::setenv("QLM_OUTPUT_ROOT", dir("root").c_str(), 1);
  const int code = run({"gen-data"});
  ::unsetenv("QLM_OUTPUT_ROOT");
  ASSERT_EQ(code, 0);
  EXPECT_TRUE(fs::exists(dir("root") + "/gen-data/data.csv"));
}

TEST_F(CliTest, EvalDimensionMismatchIsArtifactMismatch) {
  ASSERT_EQ(run({"gen-data", "--out", dir("d9")}), 0);
  ASSERT_EQ(run({"gen-data", "--out", dir("d5"), "--features", "5"}), 0);
  ASSERT_EQ(run({"encode", "--data", dir("d9") + "/data.csv", "--out", dir("run")}), 0);
  ASSERT_EQ(run({"train", "--run", dir("run"), "--epochs", "1", "--out", dir("t")}), 0);
  EXPECT_EQ(run({"eval", "--model", dir("t") + "/model.json", "--data", dir("d5") + "/data.csv", "--out", dir("e")}), 2);
  EXPECT_EQ(err_.str().rfind("error: artifact-mismatch:", 0), 0u) << err_.str();
  EXPECT_EQ(run({"eval", "--model", dir("missing.json"), "--data", dir("d5") + "/data.csv", "--out", dir("e")}), 2);
}

TEST_F(CliTest, GrowWithIncompatibleLayoutIsStructureMismatch) {
  ASSERT_EQ(run({"gen-data", "--out", dir("data")}), 0);
  ASSERT_EQ(run({"encode", "--data", dir("data") + "/data.csv", "--bits", "3", "--out", dir("run")}), 0);
  ASSERT_EQ(run({"train", "--run", dir("run"), "--layers", "2", "--epochs", "1", "--out", dir("t")}), 0);
  write_text_file(dir("layout.json"), serialize_layout(build_brickwork_layout(5, 1, 1)));
  EXPECT_EQ(run({"grow", "--model", dir("t") + "/model.json", "--run", dir("run"), "--bits", "5", "--layout",
                 dir("layout.json"), "--out", dir("g")}),
            2);
  EXPECT_EQ(err_.str().rfind("error: structure-mismatch:", 0), 0u) << err_.str();
}

TEST_F(CliTest, DynamicsPipelineAndRollout) {
  ASSERT_EQ(run({"gen-data", "--kind", "trajectories", "--count", "6", "--steps", "20", "--out", dir("data")}), 0)
      << err_.str();
  ASSERT_EQ(run({"encode", "--task", "dynamics", "--data", dir("data") + "/data.csv", "--bits", "3", "--out",
                 dir("run")}),
            0)
      << err_.str();
  EXPECT_TRUE(read_json(dir("run") + "/summary.json").contains("conflict_fraction"));
  ASSERT_EQ(run({"train", "--run", dir("run"), "--epochs", "3", "--out", dir("t")}), 0) << err_.str();
  ASSERT_EQ(run({"rollout", "--model", dir("t") + "/model.json", "--z0", "110", "--horizon", "4", "--out", dir("r")}),
            0)
      << err_.str();
  const CsvTable r = read_csv(dir("r") + "/rollout.csv");
  EXPECT_EQ(r.rows.size(), 5u);
  EXPECT_EQ(r.rows[0][1], "110");
  EXPECT_EQ(r.header, (std::vector<std::string>{"step", "bits", "x1"}));
  EXPECT_EQ(run({"rollout", "--model", dir("t") + "/model.json", "--z0", "11", "--out", dir("r2")}), 1);
}

TEST_F(CliTest, BadInputsFailCleanly) {
  EXPECT_NE(run({}), 0);
  EXPECT_NE(run({"frobnicate"}), 0);
  EXPECT_EQ(run({"encode", "--data", dir("nothing.csv"), "--out", dir("x")}), 2);
  write_text_file(dir("cfg.json"), R"({"no_such_option": 1})");
  EXPECT_EQ(run({"gen-data", "--config", dir("cfg.json"), "--out", dir("y")}), 1);
  EXPECT_EQ(err_.str().rfind("error: parse-error:", 0), 0u) << err_.str();
  EXPECT_EQ(run({"train", "--run", dir("nowhere"), "--out", dir("z")}), 2);
}

TEST_F(CliTest, BaselineOnSeparableData) {
  TwoClassOptions opts;
  opts.mean_shift = 3.0;
  opts.log_sd = 0.3;
  const RawDataset raw = generate_two_class(opts);
  std::vector<std::string> names;
  for (int j = 0; j < 9; ++j) names.push_back("f" + std::to_string(j));
  write_csv(dir("sep.csv"), dataset_to_table(raw, names, "label"));
  ASSERT_EQ(run({"baseline", "--data", dir("sep.csv"), "--out", dir("b")}), 0) << err_.str();
  EXPECT_GE(read_json(dir("b") + "/baseline.json")["logistic_regression_test_accuracy"].get<double>(), 0.95);
}

}  // namespace
}  // namespace qlm
