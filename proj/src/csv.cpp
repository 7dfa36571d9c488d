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

#include "qlm/csv.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qlm/error.hpp"

namespace qlm {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    cells.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto cells = split_line(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      fail(ErrorKind::Parse, "CSV line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                 " cells, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) fail(ErrorKind::Parse, "CSV input has no header row");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_text_file(path)); }

std::string to_csv(const CsvTable& table) {
  std::string out;
  auto append_row = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  append_row(table.header);
  for (const auto& row : table.rows) append_row(row);
  return out;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) { write_text_file(path, to_csv(table)); }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ArtifactMismatch, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
  out << text;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    fail(ErrorKind::Parse, "'" + text + "' is not a number");
  }
  return v;
}

LabeledTable table_to_dataset(const CsvTable& table, const std::string& label_column) {
  const int label_idx = table.column(label_column);
  if (label_idx < 0) fail(ErrorKind::ArtifactMismatch, "CSV has no label column '" + label_column + "'");
  LabeledTable out;
  std::vector<int> feature_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (static_cast<int>(c) == label_idx) continue;
    feature_cols.push_back(static_cast<int>(c));
    out.feature_names.push_back(table.header[c]);
  }
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  out.data.features.resize(n, static_cast<Eigen::Index>(feature_cols.size()));
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = table.rows[static_cast<std::size_t>(r)];
    for (std::size_t k = 0; k < feature_cols.size(); ++k) {
      out.data.features(r, static_cast<Eigen::Index>(k)) = parse_double(row[static_cast<std::size_t>(feature_cols[k])]);
    }
    const double y = parse_double(row[static_cast<std::size_t>(label_idx)]);
    if (y < 0 || y != std::floor(y)) fail(ErrorKind::Parse, "label '" + row[static_cast<std::size_t>(label_idx)] + "' is not a class index");
    out.data.labels.push_back(static_cast<int>(y));
  }
  return out;
}

CsvTable dataset_to_table(const RawDataset& data, const std::vector<std::string>& feature_names,
                          const std::string& label_column) {
  require(static_cast<Eigen::Index>(feature_names.size()) == data.dimension(), "one name per feature is required");
  CsvTable table;
  table.header = feature_names;
  table.header.push_back(label_column);
  for (Eigen::Index r = 0; r < data.size(); ++r) {
    auto& row = table.rows.emplace_back();
    for (Eigen::Index c = 0; c < data.dimension(); ++c) row.push_back(format_double(data.features(r, c)));
    row.push_back(std::to_string(data.labels[static_cast<std::size_t>(r)]));
  }
  return table;
}

std::vector<Trajectory> table_to_trajectories(const CsvTable& table) {
  const int id_col = table.column("trajectory");
  const int t_col = table.column("t");
  if (t_col < 0) fail(ErrorKind::ArtifactMismatch, "trajectory CSV has no 't' column");
  std::vector<int> state_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (static_cast<int>(c) != id_col && static_cast<int>(c) != t_col) state_cols.push_back(static_cast<int>(c));
  }
  if (state_cols.empty()) fail(ErrorKind::ArtifactMismatch, "trajectory CSV has no state columns");

  std::vector<Trajectory> out;
  std::vector<std::vector<double>> pending;
  std::vector<double> times;
  std::string current_id;
  auto flush = [&]() {
    if (times.empty()) return;
    Trajectory t;
    t.times = times;
    t.states.resize(static_cast<Eigen::Index>(pending.size()), static_cast<Eigen::Index>(state_cols.size()));
    for (std::size_t r = 0; r < pending.size(); ++r) {
      for (std::size_t c = 0; c < state_cols.size(); ++c) {
        t.states(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = pending[r][c];
      }
    }
    validate(t);
    out.push_back(std::move(t));
    pending.clear();
    times.clear();
  };
  for (const auto& row : table.rows) {
    const std::string id = id_col >= 0 ? row[static_cast<std::size_t>(id_col)] : std::string();
    if (id != current_id) {
      flush();
      current_id = id;
    }
    times.push_back(parse_double(row[static_cast<std::size_t>(t_col)]));
    auto& state = pending.emplace_back();
    for (int c : state_cols) state.push_back(parse_double(row[static_cast<std::size_t>(c)]));
  }
  flush();
  return out;
}

CsvTable trajectories_to_table(const std::vector<Trajectory>& trajectories) {
  CsvTable table;
  table.header = {"trajectory", "t"};
  const Eigen::Index d = trajectories.empty() ? 0 : trajectories.front().dimension();
  for (Eigen::Index c = 0; c < d; ++c) table.header.push_back("x" + std::to_string(c + 1));
  for (std::size_t k = 0; k < trajectories.size(); ++k) {
    const auto& t = trajectories[k];
    for (Eigen::Index n = 0; n < t.length(); ++n) {
      auto& row = table.rows.emplace_back();
      row.push_back(std::to_string(k));
      row.push_back(format_double(t.times[static_cast<std::size_t>(n)]));
      for (Eigen::Index c = 0; c < d; ++c) row.push_back(format_double(t.states(n, c)));
    }
  }
  return table;
}

}  // namespace qlm
