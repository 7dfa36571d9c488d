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

#include "qlm/serialize.hpp"

#include <json.hpp>

#include <string>

#include "qlm/error.hpp"

namespace qlm {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& message) { fail(ErrorKind::Parse, message); }

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    parse_fail(std::string("malformed document: ") + e.what());
  }
}

const json& field(const json& obj, const std::string& name, const std::string& where) {
  if (!obj.is_object()) parse_fail(where + " must be an object");
  const auto it = obj.find(name);
  if (it == obj.end()) parse_fail("missing field '" + where + name + "'");
  return *it;
}

template <typename T>
T get_as(const json& value, const std::string& name) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    parse_fail("field '" + name + "' has the wrong type");
  }
}

void check_header(const json& doc, std::string_view format) {
  const std::string fmt = get_as<std::string>(field(doc, "format", ""), "format");
  if (fmt != format) parse_fail("field 'format' is '" + fmt + "', expected '" + std::string(format) + "'");
  const int version = get_as<int>(field(doc, "version", ""), "version");
  if (version > kFormatVersion || version < 1) {
    parse_fail("field 'version' is " + std::to_string(version) + ", this reader supports up to " +
               std::to_string(kFormatVersion));
  }
}

json vector_json(const Eigen::VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Eigen::VectorXd vector_from(const json& value, const std::string& name) {
  const auto v = get_as<std::vector<double>>(value, name);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json encoder_body(const EncoderSpec& spec) {
  json doc;
  doc["pca_mean"] = vector_json(spec.pca_mean);
  json rows = json::array();
  for (Eigen::Index r = 0; r < spec.pca_components.rows(); ++r) {
    rows.push_back(vector_json(spec.pca_components.row(r).transpose()));
  }
  doc["pca_components"] = rows;
  doc["component_min"] = vector_json(spec.component_min);
  doc["component_max"] = vector_json(spec.component_max);
  doc["bit_allocation"] = spec.bit_allocation;
  if (!spec.feature_names.empty()) doc["feature_names"] = spec.feature_names;
  return doc;
}

EncoderSpec encoder_from(const json& doc, const std::string& where) {
  EncoderSpec spec;
  spec.pca_mean = vector_from(field(doc, "pca_mean", where), where + "pca_mean");
  const json& rows = field(doc, "pca_components", where);
  if (!rows.is_array()) parse_fail("field '" + where + "pca_components' must be an array");
  const auto d = spec.pca_mean.size();
  if (static_cast<Eigen::Index>(rows.size()) != d) parse_fail("field '" + where + "pca_components' must have d rows");
  spec.pca_components.resize(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const Eigen::VectorXd row = vector_from(rows[static_cast<std::size_t>(r)], where + "pca_components");
    if (row.size() != d) parse_fail("field '" + where + "pca_components' must be square");
    spec.pca_components.row(r) = row.transpose();
  }
  spec.component_min = vector_from(field(doc, "component_min", where), where + "component_min");
  spec.component_max = vector_from(field(doc, "component_max", where), where + "component_max");
  spec.bit_allocation = get_as<std::vector<int>>(field(doc, "bit_allocation", where), where + "bit_allocation");
  if (doc.contains("feature_names")) {
    spec.feature_names = get_as<std::vector<std::string>>(doc["feature_names"], where + "feature_names");
  }
  try {
    validate(spec);
  } catch (const Error& e) {
    parse_fail("invalid '" + where + "' block: " + e.what());
  }
  return spec;
}

GateKind gate_from(const json& value, const std::string& name) {
  const auto text = get_as<std::string>(value, name);
  const auto kind = parse_gate_kind(text);
  if (!kind) parse_fail("unknown gate kind '" + text + "' in field '" + name + "'");
  return *kind;
}

json layout_body(const CircuitLayout& layout) {
  json doc;
  doc["num_input_qubits"] = layout.num_input_qubits();
  doc["num_output_qubits"] = layout.num_output_qubits();
  json gates;
  for (GateKind k : layout.node_gates().euler) gates["euler"].push_back(std::string(gate_name(k)));
  for (GateKind k : layout.node_gates().interaction) gates["interaction"].push_back(std::string(gate_name(k)));
  doc["node_gates"] = gates;
  json layers = json::array();
  for (const auto& layer : layout.pairs()) {
    json l = json::array();
    for (const auto& [a, b] : layer) l.push_back({a, b});
    layers.push_back(l);
  }
  doc["layers"] = layers;
  return doc;
}

CircuitLayout layout_from(const json& doc) {
  const int nx = get_as<int>(field(doc, "num_input_qubits", ""), "num_input_qubits");
  const int ny = get_as<int>(field(doc, "num_output_qubits", ""), "num_output_qubits");
  NodeGates gates;
  if (doc.contains("node_gates")) {
    const json& g = doc["node_gates"];
    const json& euler = field(g, "euler", "node_gates.");
    const json& inter = field(g, "interaction", "node_gates.");
    if (!euler.is_array() || euler.size() != 3) parse_fail("field 'node_gates.euler' must list three gates");
    if (!inter.is_array() || inter.size() != 3) parse_fail("field 'node_gates.interaction' must list three gates");
    for (std::size_t k = 0; k < 3; ++k) {
      gates.euler[k] = gate_from(euler[k], "node_gates.euler[" + std::to_string(k) + "]");
      gates.interaction[k] = gate_from(inter[k], "node_gates.interaction[" + std::to_string(k) + "]");
    }
  }
  const json& layers_json = field(doc, "layers", "");
  if (!layers_json.is_array()) parse_fail("field 'layers' must be an array");
  std::vector<std::vector<QubitPair>> layers;
  for (std::size_t li = 0; li < layers_json.size(); ++li) {
    auto& layer = layers.emplace_back();
    for (const json& node : layers_json[li]) {
      const auto pair = get_as<std::vector<int>>(node, "layers[" + std::to_string(li) + "]");
      if (pair.size() != 2) parse_fail("field 'layers[" + std::to_string(li) + "]' nodes must be [a, b] pairs");
      layer.emplace_back(pair[0], pair[1]);
    }
  }
  try {
    return CircuitLayout(nx, ny, layers, gates);
  } catch (const Error& e) {
    parse_fail(std::string("invalid layout in field 'layers': ") + e.what());
  }
}

}  // namespace

std::string_view task_name(Task task) { return task == Task::Dynamics ? "dynamics" : "classification"; }

std::string serialize_model(const QlmModel& model, const EncoderSpec* encoder) {
  json doc;
  doc["format"] = "qlm-model";
  doc["version"] = kFormatVersion;
  doc["task"] = std::string(task_name(model.task));
  doc.update(layout_body(model.layout));
  doc["params"] = vector_json(model.params);
  if (encoder != nullptr) doc["encoder"] = encoder_body(*encoder);
  return doc.dump(2) + "\n";
}

ModelDocument deserialize_model(std::string_view text) {
  const json doc = parse_document(text);
  check_header(doc, "qlm-model");
  const auto task_text = get_as<std::string>(field(doc, "task", ""), "task");
  Task task;
  if (task_text == "classification") {
    task = Task::Classification;
  } else if (task_text == "dynamics") {
    task = Task::Dynamics;
  } else {
    parse_fail("field 'task' has unknown value '" + task_text + "'");
  }
  CircuitLayout layout = layout_from(doc);
  Eigen::VectorXd params = vector_from(field(doc, "params", ""), "params");
  if (params.size() != layout.parameter_count()) {
    parse_fail("field 'params' has " + std::to_string(params.size()) + " entries, layout needs " +
               std::to_string(layout.parameter_count()));
  }
  std::optional<EncoderSpec> encoder;
  if (doc.contains("encoder")) encoder = encoder_from(doc["encoder"], "encoder.");
  try {
    return ModelDocument{QlmModel(std::move(layout), std::move(params), task), std::move(encoder)};
  } catch (const Error& e) {
    parse_fail(std::string("field 'task' inconsistent with layout: ") + e.what());
  }
}

std::string serialize_encoder(const EncoderSpec& spec) {
  json doc;
  doc["format"] = "qlm-encoder";
  doc["version"] = kFormatVersion;
  doc.update(encoder_body(spec));
  return doc.dump(2) + "\n";
}

EncoderSpec deserialize_encoder(std::string_view text) {
  const json doc = parse_document(text);
  check_header(doc, "qlm-encoder");
  return encoder_from(doc, "");
}

std::string serialize_layout(const CircuitLayout& layout) {
  json doc;
  doc["format"] = "qlm-layout";
  doc["version"] = kFormatVersion;
  doc.update(layout_body(layout));
  return doc.dump(2) + "\n";
}

CircuitLayout deserialize_layout(std::string_view text) {
  const json doc = parse_document(text);
  check_header(doc, "qlm-layout");
  return layout_from(doc);
}

std::string serialize_train_config(const TrainConfig& config) {
  json doc;
  doc["format"] = "qlm-train-config";
  doc["version"] = kFormatVersion;
  doc["max_epochs"] = config.max_epochs;
  doc["sweep_order"] = config.order == SweepOrder::Sequential ? "sequential" : "random";
  doc["epsilon"] = config.epsilon;
  doc["flat_tolerance"] = config.flat_tolerance;
  doc["seed"] = config.seed;
  doc["shots"] = config.shots;
  return doc.dump(2) + "\n";
}

TrainConfig deserialize_train_config(std::string_view text) {
  const json doc = parse_document(text);
  check_header(doc, "qlm-train-config");
  TrainConfig config;
  if (doc.contains("max_epochs")) config.max_epochs = get_as<int>(doc["max_epochs"], "max_epochs");
  if (doc.contains("sweep_order")) {
    const auto order = get_as<std::string>(doc["sweep_order"], "sweep_order");
    if (order == "sequential") {
      config.order = SweepOrder::Sequential;
    } else if (order == "random") {
      config.order = SweepOrder::RandomPermutation;
    } else {
      parse_fail("field 'sweep_order' has unknown value '" + order + "'");
    }
  }
  if (doc.contains("epsilon")) config.epsilon = get_as<double>(doc["epsilon"], "epsilon");
  if (doc.contains("flat_tolerance")) config.flat_tolerance = get_as<double>(doc["flat_tolerance"], "flat_tolerance");
  if (doc.contains("seed")) config.seed = get_as<std::uint64_t>(doc["seed"], "seed");
  if (doc.contains("shots")) config.shots = get_as<long>(doc["shots"], "shots");
  try {
    validate(config);
  } catch (const Error& e) {
    parse_fail(std::string("invalid training config: ") + e.what());
  }
  return config;
}

}  // namespace qlm
