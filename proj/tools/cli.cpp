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

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "qlm/baseline.hpp"
#include "qlm/csv.hpp"
#include "qlm/datagen.hpp"
#include "qlm/dynamics.hpp"
#include "qlm/encoder.hpp"
#include "qlm/error.hpp"
#include "qlm/model.hpp"
#include "qlm/serialize.hpp"
#include "qlm/trainer.hpp"

namespace qlm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kOutputRootEnv = "QLM_OUTPUT_ROOT";

// Options bound to variables, with JSON read/write so a run's resolved
// configuration can be recorded and replayed through --config.
class OptionSet {
 public:
  explicit OptionSet(CLI::App* app) : app_(app) {}

  template <typename T>
  CLI::Option* add(const std::string& name, T& var, const std::string& description) {
    auto* opt = app_->add_option("--" + name, var, description)->capture_default_str();
    entries_.push_back({name, [&var] { return json(var); }, [&var](const json& j) { var = j.get<T>(); }});
    return opt;
  }

  void apply_config(const fs::path& path) {
    json doc;
    try {
      doc = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
      fail(ErrorKind::Parse, "config '" + path.string() + "' is malformed: " + e.what());
    }
    if (!doc.is_object()) fail(ErrorKind::Parse, "config '" + path.string() + "' must be an object");
    if (doc.contains("version") && doc["version"].is_number_integer() && doc["version"].get<int>() > kFormatVersion) {
      fail(ErrorKind::Parse, "config '" + path.string() + "' has a newer format version");
    }
    for (const auto& [key, value] : doc.items()) {
      if (key == "format" || key == "version" || key == "command" || key == "config") continue;
      const auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.name == key; });
      if (it == entries_.end()) fail(ErrorKind::Parse, "config key '" + key + "' is not an option of this command");
      try {
        it->set(value);
      } catch (const json::exception&) {
        fail(ErrorKind::Parse, "config key '" + key + "' has the wrong type");
      }
    }
  }

  json resolved(const std::string& command) const {
    json doc;
    doc["format"] = "qlm-run-config";
    doc["version"] = kFormatVersion;
    doc["command"] = command;
    for (const auto& e : entries_) doc[e.name] = e.get();
    return doc;
  }

 private:
  struct Entry {
    std::string name;
    std::function<json()> get;
    std::function<void(const json&)> set;
  };
  CLI::App* app_;
  std::vector<Entry> entries_;
};

struct Command {
  std::string name;
  CLI::App* app = nullptr;
  std::unique_ptr<OptionSet> options;
  std::string config_path;
  std::string out_dir;
  std::function<void(const fs::path&)> body;
};

fs::path resolve_out(const std::string& flag, const std::string& command) {
  if (!flag.empty()) return flag;
  const char* root = std::getenv(kOutputRootEnv);
  return fs::path(root != nullptr && *root != '\0' ? root : "runs") / command;
}

void write_json(const fs::path& path, const json& doc) { write_text_file(path, doc.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ArtifactMismatch, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

// Library parse failures on input artifacts become artifact mismatches.
template <typename F>
auto load_artifact(const fs::path& path, F&& parse) {
  const std::string text = read_text_file(path);
  try {
    return parse(text);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse) fail(ErrorKind::ArtifactMismatch, "'" + path.string() + "': " + e.what());
    throw;
  }
}

struct RunManifest {
  std::string task = "classification";
  std::string label_column = "label";
};

void write_manifest(const fs::path& dir, const RunManifest& m) {
  json doc;
  doc["format"] = "qlm-run";
  doc["version"] = kFormatVersion;
  doc["task"] = m.task;
  doc["label_column"] = m.label_column;
  write_json(dir / "run.json", doc);
}

RunManifest read_manifest(const fs::path& dir) {
  const json doc = read_json(dir / "run.json");
  if (doc.value("format", "") != "qlm-run" || doc.value("version", 0) < 1 || doc.value("version", 0) > kFormatVersion) {
    fail(ErrorKind::ArtifactMismatch, "'" + (dir / "run.json").string() + "' is not a supported run manifest");
  }
  RunManifest m;
  m.task = doc.value("task", "classification");
  m.label_column = doc.value("label_column", "label");
  return m;
}

void check_task(const std::string& task) {
  if (task != "classification" && task != "dynamics") {
    fail(ErrorKind::InvalidArgument, "task must be 'classification' or 'dynamics'");
  }
}

CsvTable encoded_table(const EncodedDataset& data) {
  CsvTable t;
  t.header = {"z", "label", "count"};
  for (const auto& [z, row] : data.counts()) {
    for (const auto& [y, c] : row) {
      t.rows.push_back({BitString(z, data.bit_width()).str(), std::to_string(y), std::to_string(c)});
    }
  }
  return t;
}

// Encoded data for a labelled table, checked against the encoder's columns.
EncodedDataset encode_table(const CsvTable& table, const std::string& label, const EncoderSpec& spec) {
  const LabeledTable lt = table_to_dataset(table, label);
  if (lt.data.dimension() != spec.dimension()) {
    fail(ErrorKind::ArtifactMismatch, "data has " + std::to_string(lt.data.dimension()) +
                                          " feature columns, encoder expects " + std::to_string(spec.dimension()));
  }
  if (!spec.feature_names.empty() && spec.feature_names != lt.feature_names) {
    fail(ErrorKind::ArtifactMismatch, "data feature columns differ from the encoder's");
  }
  return build_encoded_dataset(lt.data, spec);
}

EncodedDataset encode_trajectories(const CsvTable& table, const EncoderSpec& spec) {
  const auto trajs = table_to_trajectories(table);
  for (const auto& t : trajs) {
    if (t.dimension() != spec.dimension()) {
      fail(ErrorKind::ArtifactMismatch, "trajectory dimension does not match the encoder");
    }
  }
  return build_transition_dataset(trajs, spec).data;
}

struct RunData {
  RunManifest manifest;
  EncoderSpec encoder;
  EncodedDataset train;
  EncodedDataset test;
};

RunData load_run(const fs::path& dir) {
  RunData rd;
  rd.manifest = read_manifest(dir);
  rd.encoder = load_artifact(dir / "encoder.json", [](const std::string& t) { return deserialize_encoder(t); });
  const CsvTable train = read_csv(dir / "train.csv");
  const CsvTable test = read_csv(dir / "test.csv");
  if (rd.manifest.task == "dynamics") {
    rd.train = encode_trajectories(train, rd.encoder);
    rd.test = encode_trajectories(test, rd.encoder);
  } else {
    rd.train = encode_table(train, rd.manifest.label_column, rd.encoder);
    rd.test = encode_table(test, rd.manifest.label_column, rd.encoder);
  }
  return rd;
}

struct TrainFlags {
  int epochs = 200;
  std::uint64_t seed = 0;
  std::string order = "random";
  double epsilon = 1e-6;
  double flat_tolerance = 1e-12;
  long shots = 0;
  std::string train_config;

  void add_to(OptionSet& opts) {
    opts.add("epochs", epochs, "Maximum training epochs");
    opts.add("seed", seed, "Seed for initialization and sweep order");
    opts.add("order", order, "Coordinate sweep order")->check(CLI::IsMember({"random", "sequential"}));
    opts.add("epsilon", epsilon, "Stop when an epoch lowers the loss by less than this");
    opts.add("flat-tolerance", flat_tolerance, "Sinusoid amplitude below which a coordinate is left alone");
    opts.add("shots", shots, "Shots per loss evaluation (0 = exact probabilities)");
    opts.add("train-config", train_config, "Training config document; its fields override the flags");
  }

  TrainConfig config() const {
    TrainConfig c;
    if (!train_config.empty()) {
      c = load_artifact(train_config, [](const std::string& t) { return deserialize_train_config(t); });
      return c;
    }
    c.max_epochs = epochs;
    c.seed = seed;
    c.order = order == "sequential" ? SweepOrder::Sequential : SweepOrder::RandomPermutation;
    c.epsilon = epsilon;
    c.flat_tolerance = flat_tolerance;
    c.shots = shots;
    validate(c);
    return c;
  }
};

void write_training_outputs(const fs::path& dir, const TrainResult& result, const EncoderSpec& encoder,
                            const TrainConfig& config, json summary) {
  write_text_file(dir / "model.json", serialize_model(result.model, &encoder));
  write_text_file(dir / "train_config.json", serialize_train_config(config));

  CsvTable trace;
  trace.header = {"update_index", "loss"};
  for (std::size_t i = 0; i < result.report.loss_trace.size(); ++i) {
    trace.rows.push_back({std::to_string(i + 1), format_double(result.report.loss_trace[i])});
  }
  write_csv(dir / "loss_trace.csv", trace);

  CsvTable epochs;
  epochs.header = {"epoch", "train_acc", "test_acc", "seconds"};
  for (const auto& e : result.report.epochs) {
    epochs.rows.push_back({std::to_string(e.epoch), format_double(e.train_accuracy),
                           e.test_accuracy ? format_double(*e.test_accuracy) : "", format_double(e.seconds)});
  }
  write_csv(dir / "epochs.csv", epochs);

  const auto& last = result.report.epochs.back();
  summary["format"] = "qlm-train-summary";
  summary["version"] = kFormatVersion;
  summary["task"] = std::string(task_name(result.model.task));
  summary["num_qubits"] = result.model.layout.num_qubits();
  summary["parameter_count"] = result.model.layout.parameter_count();
  summary["initial_loss"] = result.report.initial_loss;
  summary["final_loss"] = last.train_loss;
  summary["epochs"] = result.report.epochs.size();
  summary["converged"] = result.report.converged;
  summary["train_accuracy"] = last.train_accuracy;
  summary["test_accuracy"] = last.test_accuracy ? json(*last.test_accuracy) : json(nullptr);
  write_json(dir / "summary.json", summary);
}

int output_qubits_for(const RunData& rd) {
  if (rd.manifest.task == "dynamics") return 0;
  const int classes = std::max({2, rd.train.max_label() + 1, rd.test.max_label() + 1});
  int ny = 0;
  while ((1 << ny) < classes) ++ny;
  return ny;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      out.push_back(std::stoi(cell));
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidArgument, "'" + cell + "' is not an integer");
    }
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(parse_double(cell));
  return out;
}

// ---- gen-data --------------------------------------------------------------

void add_gen_data(Command& cmd) {
  struct Flags {
    std::string kind = "two-class-proteins";
    std::uint64_t seed = 0;
    TwoClassOptions proteins;
    std::string system = "linear-decay";
    int count = 20;
    int steps = 50;
    double dt = 0.05;
    int dimension = 1;
    double x0_min = 0.5;
    double x0_max = 1.5;
    ToySystemParams params;
  };
  auto f = std::make_shared<Flags>();
  auto& o = *cmd.options;
  o.add("kind", f->kind, "two-class-proteins or trajectories")
      ->check(CLI::IsMember({"two-class-proteins", "trajectories"}));
  o.add("seed", f->seed, "Random seed");
  o.add("features", f->proteins.features, "Feature count (two-class-proteins)");
  o.add("per-class", f->proteins.per_class, "Samples per class (two-class-proteins)");
  o.add("shift", f->proteins.mean_shift, "Log-scale mean shift between classes");
  o.add("correlation", f->proteins.correlation, "Equicorrelation of the log-levels");
  o.add("log-sd", f->proteins.log_sd, "Standard deviation of the log-levels");
  o.add("system", f->system, "linear-decay or two-species-oscillator")
      ->check(CLI::IsMember({"linear-decay", "two-species-oscillator"}));
  o.add("count", f->count, "Number of trajectories");
  o.add("steps", f->steps, "Integration steps per trajectory");
  o.add("dt", f->dt, "Time step");
  o.add("dimension", f->dimension, "State dimension for linear decay");
  o.add("x0-min", f->x0_min, "Lower bound of initial components");
  o.add("x0-max", f->x0_max, "Upper bound of initial components");
  o.add("rate", f->params.decay_rate, "Linear decay rate");
  o.add("alpha", f->params.alpha, "Oscillator alpha");
  o.add("beta", f->params.beta, "Oscillator beta");
  o.add("gamma", f->params.gamma, "Oscillator gamma");
  o.add("delta", f->params.delta, "Oscillator delta");
  cmd.body = [f](const fs::path& dir) {
    if (f->kind == "two-class-proteins") {
      TwoClassOptions opts = f->proteins;
      opts.seed = f->seed;
      const RawDataset raw = generate_two_class(opts);
      std::vector<std::string> names;
      for (int j = 0; j < opts.features; ++j) names.push_back("p" + std::to_string(j + 1));
      write_csv(dir / "data.csv", dataset_to_table(raw, names, "label"));
      return;
    }
    require(f->count >= 1, "count must be at least 1");
    require(f->x0_max >= f->x0_min, "x0-max must not be below x0-min");
    TrajectoryOptions opts;
    opts.system = f->system == "linear-decay" ? ToySystem::LinearDecay : ToySystem::TwoSpeciesOscillator;
    opts.params = f->params;
    opts.steps = f->steps;
    opts.dt = f->dt;
    const int dim = opts.system == ToySystem::LinearDecay ? f->dimension : 2;
    require(dim >= 1, "dimension must be at least 1");
    std::mt19937_64 rng(f->seed);
    std::uniform_real_distribution<double> u(f->x0_min, f->x0_max);
    for (int k = 0; k < f->count; ++k) {
      Eigen::VectorXd x0(dim);
      for (int i = 0; i < dim; ++i) x0(i) = u(rng);
      opts.initial_states.push_back(x0);
    }
    write_csv(dir / "data.csv", trajectories_to_table(generate_toy_trajectories(opts)));
  };
}

// ---- encode ----------------------------------------------------------------

void add_encode(Command& cmd) {
  struct Flags {
    std::string data;
    std::string label = "label";
    int bits = 3;
    double test_fraction = 0.2;
    std::uint64_t seed = 0;
    std::string task = "classification";
  };
  auto f = std::make_shared<Flags>();
  auto& o = *cmd.options;
  o.add("data", f->data, "Input CSV (features + label, or trajectories)");
  o.add("label", f->label, "Label column");
  o.add("bits", f->bits, "Total bits B = input qubits");
  o.add("test-fraction", f->test_fraction, "Held-out fraction");
  o.add("seed", f->seed, "Split seed");
  o.add("task", f->task, "classification or dynamics")->check(CLI::IsMember({"classification", "dynamics"}));
  cmd.body = [f](const fs::path& dir) {
    require(!f->data.empty(), "--data is required");
    check_task(f->task);
    const CsvTable table = read_csv(f->data);
    json summary;
    summary["format"] = "qlm-encode-summary";
    summary["version"] = kFormatVersion;
    EncoderSpec spec;
    if (f->task == "classification") {
      LabeledTable lt = table_to_dataset(table, f->label);
      const DatasetSplit split = train_test_split(lt.data, f->test_fraction, f->seed);
      spec = fit_encoder(split.train, f->bits);
      spec.feature_names = lt.feature_names;
      write_csv(dir / "train.csv", dataset_to_table(split.train, lt.feature_names, f->label));
      write_csv(dir / "test.csv", dataset_to_table(split.test, lt.feature_names, f->label));
      const EncodedDataset train = build_encoded_dataset(split.train, spec);
      const EncodedDataset test = build_encoded_dataset(split.test, spec);
      write_csv(dir / "encoded_train.csv", encoded_table(train));
      write_csv(dir / "encoded_test.csv", encoded_table(test));
      summary["train_samples"] = split.train.size();
      summary["test_samples"] = split.test.size();
      summary["distinct_train_inputs"] = train.distinct_inputs();
      summary["mutual_information_nats"] = encoded_mutual_information(split.train, spec);
    } else {
      auto trajs = table_to_trajectories(table);
      std::vector<int> order(trajs.size());
      std::iota(order.begin(), order.end(), 0);
      std::mt19937_64 rng(f->seed);
      std::shuffle(order.begin(), order.end(), rng);
      const auto n_test = std::min<std::size_t>(
          trajs.size() - 1, static_cast<std::size_t>(std::lround(f->test_fraction * static_cast<double>(trajs.size()))));
      std::vector<Trajectory> train, test;
      for (std::size_t k = 0; k < order.size(); ++k) (k < n_test ? test : train).push_back(trajs[static_cast<std::size_t>(order[k])]);
      spec = fit_state_encoder(train, f->bits);
      write_csv(dir / "train.csv", trajectories_to_table(train));
      write_csv(dir / "test.csv", trajectories_to_table(test));
      const TransitionDataset tr = build_transition_dataset(train, spec);
      write_csv(dir / "encoded_train.csv", encoded_table(tr.data));
      summary["train_trajectories"] = train.size();
      summary["test_trajectories"] = test.size();
      summary["transition_pairs"] = tr.pair_count;
      summary["distinct_train_inputs"] = tr.data.distinct_inputs();
      summary["conflicting_inputs"] = tr.conflicting_inputs;
      summary["conflict_fraction"] = tr.conflict_fraction();
    }
    summary["bit_allocation"] = spec.bit_allocation;
    write_text_file(dir / "encoder.json", serialize_encoder(spec));
    write_manifest(dir, RunManifest{f->task, f->label});
    write_json(dir / "summary.json", summary);
  };
}

// ---- train -----------------------------------------------------------------

void add_train(Command& cmd) {
  struct Flags {
    std::string run;
    int layers = 2;
    std::string init = "random";
    TrainFlags training;
  };
  auto f = std::make_shared<Flags>();
  auto& o = *cmd.options;
  o.add("run", f->run, "Run directory written by encode");
  o.add("layers", f->layers, "Brickwork layers");
  o.add("init", f->init, "random or identity")->check(CLI::IsMember({"random", "identity"}));
  f->training.add_to(o);
  cmd.body = [f](const fs::path& dir) {
    require(!f->run.empty(), "--run is required");
    const RunData rd = load_run(f->run);
    const TrainConfig config = f->training.config();
    CircuitLayout layout = build_brickwork_layout(rd.encoder.total_bits(), output_qubits_for(rd), f->layers);
    QlmModel model = f->init == "identity" ? QlmModel::identity(layout) : QlmModel::random(layout, config.seed);
    const TrainResult result = train(std::move(model), rd.train, &rd.test, config);
    write_training_outputs(dir, result, rd.encoder, config, json::object());
  };
}

// ---- eval ------------------------------------------------------------------

void add_eval(Command& cmd) {
  struct Flags {
    std::string model;
    std::string data;
    std::string label = "label";
  };
  auto f = std::make_shared<Flags>();
  auto& o = *cmd.options;
  o.add("model", f->model, "Model document");
  o.add("data", f->data, "CSV to evaluate on");
  o.add("label", f->label, "Label column (classification)");
  cmd.body = [f](const fs::path& dir) {
    require(!f->model.empty() && !f->data.empty(), "--model and --data are required");
    const ModelDocument doc = load_artifact(f->model, [](const std::string& t) { return deserialize_model(t); });
    if (!doc.encoder) fail(ErrorKind::ArtifactMismatch, "model document has no encoder block");
    const CsvTable table = read_csv(f->data);
    const EncodedDataset data = doc.model.task == Task::Dynamics ? encode_trajectories(table, *doc.encoder)
                                                                 : encode_table(table, f->label, *doc.encoder);
    if (data.bit_width() != doc.model.layout.num_input_qubits()) {
      fail(ErrorKind::ArtifactMismatch, "encoder width does not match the model's input register");
    }
    json result;
    result["format"] = "qlm-eval";
    result["version"] = kFormatVersion;
    result["samples"] = data.total();
    result["accuracy"] = accuracy(doc.model, data);
    result["loss"] = loss_value(doc.model, data);
    write_json(dir / "eval.json", result);
  };
}

// ---- grow ------------------------------------------------------------------

void add_grow(Command& cmd) {
  struct Flags {
    std::string model;
    std::string run;
    int bits = 0;
    int extra_layers = 2;
    std::string layout;
    std::string embedding;
    TrainFlags training;
  };
  auto f = std::make_shared<Flags>();
  auto& o = *cmd.options;
  o.add("model", f->model, "Trained small model document");
  o.add("run", f->run, "Run directory with the raw train/test split");
  o.add("bits", f->bits, "Total bits of the larger encoding");
  o.add("extra-layers", f->extra_layers, "Brickwork layers appended over the full register");
  o.add("layout", f->layout, "Layout document for the large model (overrides --extra-layers)");
  o.add("embedding", f->embedding, "Comma-separated large qubit for each small qubit");
  f->training.add_to(o);
  cmd.body = [f](const fs::path& dir) {
    require(!f->model.empty() && !f->run.empty(), "--model and --run are required");
    const ModelDocument small = load_artifact(f->model, [](const std::string& t) { return deserialize_model(t); });
    if (!small.encoder) fail(ErrorKind::ArtifactMismatch, "small model has no encoder block");
    const RunManifest manifest = read_manifest(f->run);
    const bool dynamics = manifest.task == "dynamics";
    if (dynamics != (small.model.task == Task::Dynamics)) {
      fail(ErrorKind::ArtifactMismatch, "model task does not match the run directory");
    }
    const CsvTable train_table = read_csv(fs::path(f->run) / "train.csv");
    const CsvTable test_table = read_csv(fs::path(f->run) / "test.csv");
    const int bits = f->bits > 0 ? f->bits : small.encoder->total_bits();

    EncoderSpec large;
    if (dynamics) {
      large = fit_state_encoder(table_to_trajectories(train_table), bits);
    } else {
      const LabeledTable lt = table_to_dataset(train_table, manifest.label_column);
      large = fit_encoder(lt.data, bits);
      large.feature_names = lt.feature_names;
    }
    if (large.dimension() != small.encoder->dimension() ||
        (large.pca_components - small.encoder->pca_components).cwiseAbs().maxCoeff() > 1e-9) {
      fail(ErrorKind::ArtifactMismatch, "small model's encoder was not fitted on this run's training data");
    }
    const EncodedDataset train = dynamics ? encode_trajectories(train_table, large)
                                          : encode_table(train_table, manifest.label_column, large);
    const EncodedDataset test = dynamics ? encode_trajectories(test_table, large)
                                         : encode_table(test_table, manifest.label_column, large);

    const int small_ny = small.model.layout.num_output_qubits();
    const int large_ny = small_ny;
    const std::vector<int> embedding = f->embedding.empty()
                                           ? (dynamics ? bit_embedding(*small.encoder, large, 0, 0)
                                                       : bit_embedding(*small.encoder, large, small_ny, large_ny))
                                           : parse_int_list(f->embedding);
    const CircuitLayout layout =
        f->layout.empty()
            ? embed_layout(small.model.layout, embedding, large.total_bits(), large_ny, f->extra_layers)
            : load_artifact(f->layout, [](const std::string& t) { return deserialize_layout(t); });
    if (layout.num_input_qubits() != large.total_bits()) {
      fail(ErrorKind::StructureMismatch, "large layout has " + std::to_string(layout.num_input_qubits()) +
                                             " input qubits, the encoding has " + std::to_string(large.total_bits()) +
                                             " bits");
    }
    const TrainConfig config = f->training.config();
    const QlmModel grown = grow_from_subnet(small.model, layout, embedding, config.seed);
    json summary;
    summary["grown_initial_test_accuracy"] = accuracy(grown, test);
    summary["embedding"] = embedding;
    summary["bit_allocation"] = large.bit_allocation;
    const TrainResult result = qlm::train(grown, train, &test, config);
    write_text_file(dir / "encoder.json", serialize_encoder(large));
    write_training_outputs(dir, result, large, config, summary);
  };
}

// ---- rollout ---------------------------------------------------------------

void add_rollout(Command& cmd) {
  struct Flags {
    std::string model;
    std::string z0;
    std::string x0;
    int horizon = 10;
    std::string mode = "argmax";
    std::uint64_t seed = 0;
  };
  auto f = std::make_shared<Flags>();
  auto& o = *cmd.options;
  o.add("model", f->model, "Dynamics model document");
  o.add("z0", f->z0, "Initial code as a bit string");
  o.add("x0", f->x0, "Initial state as comma-separated values (encoded with the model's encoder)");
  o.add("horizon", f->horizon, "Number of predicted steps");
  o.add("mode", f->mode, "argmax or sampled")->check(CLI::IsMember({"argmax", "sampled"}));
  o.add("seed", f->seed, "Seed for sampled mode");
  cmd.body = [f](const fs::path& dir) {
    require(!f->model.empty(), "--model is required");
    const ModelDocument doc = load_artifact(f->model, [](const std::string& t) { return deserialize_model(t); });
    if (doc.model.task != Task::Dynamics) fail(ErrorKind::ArtifactMismatch, "rollout needs a dynamics model");
    BitString z0;
    if (!f->x0.empty()) {
      if (!doc.encoder) fail(ErrorKind::ArtifactMismatch, "--x0 needs a model with an encoder block");
      const auto values = parse_double_list(f->x0);
      z0 = encode_value(Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())),
                        *doc.encoder);
    } else {
      require(!f->z0.empty(), "--z0 or --x0 is required");
      z0 = BitString::parse(f->z0);
    }
    const auto path = rollout(doc.model, z0, f->horizon,
                              f->mode == "sampled" ? RolloutMode::Sampled : RolloutMode::Argmax, f->seed);
    CsvTable table;
    table.header = {"step", "bits"};
    if (doc.encoder) {
      for (Eigen::Index c = 0; c < doc.encoder->dimension(); ++c) table.header.push_back("x" + std::to_string(c + 1));
    }
    for (std::size_t s = 0; s < path.size(); ++s) {
      auto& row = table.rows.emplace_back();
      row.push_back(std::to_string(s));
      row.push_back(path[s].str());
      if (doc.encoder) {
        const Eigen::VectorXd x = decode_midpoint(path[s], *doc.encoder);
        for (Eigen::Index c = 0; c < x.size(); ++c) row.push_back(format_double(x(c)));
      }
    }
    write_csv(dir / "rollout.csv", table);
  };
}

// ---- baseline --------------------------------------------------------------

void add_baseline(Command& cmd) {
  struct Flags {
    std::string run;
    std::string data;
    std::string label = "label";
    double test_fraction = 0.2;
    std::uint64_t seed = 0;
    std::string model;
    LogisticRegressionOptions lr;
  };
  auto f = std::make_shared<Flags>();
  auto& o = *cmd.options;
  o.add("run", f->run, "Run directory with train/test split (preferred)");
  o.add("data", f->data, "CSV to split when --run is not given");
  o.add("label", f->label, "Label column");
  o.add("test-fraction", f->test_fraction, "Held-out fraction when splitting --data");
  o.add("seed", f->seed, "Split seed when splitting --data");
  o.add("model", f->model, "QLM model to report alongside the baseline");
  o.add("iterations", f->lr.iterations, "Gradient descent iterations");
  o.add("learning-rate", f->lr.learning_rate, "Gradient descent step size");
  cmd.body = [f](const fs::path& dir) {
    RawDataset train, test;
    std::string label = f->label;
    CsvTable test_table;
    if (!f->run.empty()) {
      const RunManifest m = read_manifest(f->run);
      if (m.task != "classification") fail(ErrorKind::ArtifactMismatch, "baseline needs a classification run");
      label = m.label_column;
      train = table_to_dataset(read_csv(fs::path(f->run) / "train.csv"), label).data;
      test_table = read_csv(fs::path(f->run) / "test.csv");
      test = table_to_dataset(test_table, label).data;
    } else {
      require(!f->data.empty(), "--run or --data is required");
      const CsvTable table = read_csv(f->data);
      const LabeledTable lt = table_to_dataset(table, label);
      const DatasetSplit split = train_test_split(lt.data, f->test_fraction, f->seed);
      train = split.train;
      test = split.test;
      test_table = dataset_to_table(test, lt.feature_names, label);
    }
    const LogisticRegression lr = LogisticRegression::fit(train, f->lr);
    json report;
    report["format"] = "qlm-baseline";
    report["version"] = kFormatVersion;
    report["logistic_regression_train_accuracy"] = lr.accuracy(train);
    report["logistic_regression_test_accuracy"] = lr.accuracy(test);
    if (!f->model.empty()) {
      const ModelDocument doc = load_artifact(f->model, [](const std::string& t) { return deserialize_model(t); });
      if (!doc.encoder) fail(ErrorKind::ArtifactMismatch, "model document has no encoder block");
      report["qlm_test_accuracy"] = accuracy(doc.model, encode_table(test_table, label, *doc.encoder));
    }
    write_json(dir / "baseline.json", report);
  };
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum learning model toolkit: encode tabular data into bit strings, train layered "
               "circuits by exact coordinate updates, grow them from sub-networks, and roll out learned dynamics."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  std::vector<std::unique_ptr<Command>> commands;
  auto make = [&](const std::string& name, const std::string& description, void (*setup)(Command&)) {
    auto cmd = std::make_unique<Command>();
    cmd->name = name;
    cmd->app = app.add_subcommand(name, description);
    cmd->options = std::make_unique<OptionSet>(cmd->app);
    cmd->app->add_option("--config", cmd->config_path, "JSON document whose keys override the flags");
    cmd->options->add("out", cmd->out_dir,
                      std::string("Output directory (default: $") + kOutputRootEnv + "/" + name + " or runs/" + name + ")");
    setup(*cmd);
    commands.push_back(std::move(cmd));
  };
  make("gen-data", "Generate synthetic two-class protein data or toy trajectories", add_gen_data);
  make("encode", "Split a CSV, fit the bit encoder and write the encoded datasets", add_encode);
  make("train", "Train a brickwork model on an encoded run", add_train);
  make("eval", "Evaluate a model document on a CSV", add_eval);
  make("grow", "Initialize a larger model from a trained sub-network and train it", add_grow);
  make("rollout", "Iterate a dynamics model from an initial state", add_rollout);
  make("baseline", "Logistic-regression baseline on the same split", add_baseline);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  for (auto& cmd : commands) {
    if (!cmd->app->parsed()) continue;
    try {
      if (!cmd->config_path.empty()) cmd->options->apply_config(cmd->config_path);
      const fs::path dir = resolve_out(cmd->out_dir, cmd->name);
      fs::create_directories(dir);
      json resolved = cmd->options->resolved(cmd->name);
      resolved["out"] = dir.string();
      write_json(dir / "resolved_config.json", resolved);
      cmd->body(dir);
      out << cmd->name << ": wrote " << dir.string() << "\n";
      return 0;
    } catch (const Error& e) {
      err << "error: " << e.category() << ": " << e.what() << "\n";
      return e.kind() == ErrorKind::ArtifactMismatch || e.kind() == ErrorKind::StructureMismatch ? 2 : 1;
    } catch (const std::exception& e) {
      err << "error: internal: " << e.what() << "\n";
      return 1;
    }
  }
  return 1;
}

}  // namespace qlm::cli
