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

// Plain comma-separated tables with a header row. No quoting.

#include <filesystem>
#include <string>
#include <vector>

#include "qlm/dynamics.hpp"
#include "qlm/encoder.hpp"

namespace qlm {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of `name` in the header, or -1.
  int column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);
std::string to_csv(const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);
double parse_double(const std::string& text);

struct LabeledTable {
  RawDataset data;
  std::vector<std::string> feature_names;
};

/// `label_column` holds integer labels; every other column is a numeric feature.
LabeledTable table_to_dataset(const CsvTable& table, const std::string& label_column);
CsvTable dataset_to_table(const RawDataset& data, const std::vector<std::string>& feature_names,
                          const std::string& label_column);

/// Columns t, x1..xd, optionally preceded by a "trajectory" id column that
/// separates trajectories. Without it the whole table is one trajectory.
std::vector<Trajectory> table_to_trajectories(const CsvTable& table);
CsvTable trajectories_to_table(const std::vector<Trajectory>& trajectories);

}  // namespace qlm
