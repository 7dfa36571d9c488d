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

// Versioned JSON documents: models (optionally with their encoder),
// standalone encoders, layouts and training configs.
//
// Model document:
//   {
//     "format": "qlm-model", "version": 1,
//     "task": "classification" | "dynamics",
//     "num_input_qubits": Nx, "num_output_qubits": Ny,
//     "node_gates": {"euler": ["Rx","Rz","Rx"], "interaction": ["Rxx","Ryy","Rzz"]},
//     "layers": [[[a, b], ...], ...],
//     "params": [ ... ],
//     "encoder": { encoder document without "format"/"version" }   (optional)
//   }
// Angles are written in shortest round-trip form, so a reload is bit-exact.

#include <optional>
#include <string>
#include <string_view>

#include "qlm/encoder.hpp"
#include "qlm/model.hpp"
#include "qlm/trainer.hpp"

namespace qlm {

inline constexpr int kFormatVersion = 1;

struct ModelDocument {
  QlmModel model;
  std::optional<EncoderSpec> encoder;
};

std::string serialize_model(const QlmModel& model, const EncoderSpec* encoder = nullptr);
ModelDocument deserialize_model(std::string_view text);

std::string serialize_encoder(const EncoderSpec& spec);
EncoderSpec deserialize_encoder(std::string_view text);

/// Layout-only document: num_input_qubits, num_output_qubits, layers and
/// optional node_gates.
std::string serialize_layout(const CircuitLayout& layout);
CircuitLayout deserialize_layout(std::string_view text);

/// Training config: every field optional, defaults from TrainConfig.
///   {"format": "qlm-train-config", "version": 1, "max_epochs": 200,
///    "sweep_order": "random" | "sequential", "epsilon": 1e-6,
///    "flat_tolerance": 1e-12, "seed": 0, "shots": 0}
std::string serialize_train_config(const TrainConfig& config);
TrainConfig deserialize_train_config(std::string_view text);

std::string_view task_name(Task task);

}  // namespace qlm
