// Copyright 2026 The XFL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xfl/data/table.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "xfl/common/error.hpp"

namespace xfl::data {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& cell, size_t line_no, size_t col) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ValidationError("csv line " + std::to_string(line_no) + " column " +
                          std::to_string(col + 1) + ": not a number: '" +
                          cell + "'");
  }
  return value;
}

std::string format_number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw ValidationError("unformattable number");
  return std::string(buf, ptr);
}

}  // namespace

void Table::validate() const {
  std::unordered_set<std::string> names(feature_names.begin(),
                                        feature_names.end());
  if (names.size() != feature_names.size()) {
    throw ValidationError("duplicate feature names in table");
  }
  if (columns.size() != feature_names.size()) {
    throw ValidationError("table has " + std::to_string(columns.size()) +
                          " columns but " +
                          std::to_string(feature_names.size()) +
                          " feature names");
  }
  for (size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != ids.size()) {
      throw ValidationError("column '" + feature_names[j] + "' has " +
                            std::to_string(columns[j].size()) +
                            " values for " + std::to_string(ids.size()) +
                            " rows");
    }
  }
  if (labels && labels->size() != ids.size()) {
    throw ValidationError("label column has " +
                          std::to_string(labels->size()) + " values for " +
                          std::to_string(ids.size()) + " rows");
  }
}

std::vector<double> Table::row(size_t i) const {
  if (i >= n_rows()) throw ValidationError("row index out of range");
  std::vector<double> out(n_cols());
  for (size_t j = 0; j < n_cols(); ++j) out[j] = columns[j][i];
  return out;
}

size_t Table::feature_index(const std::string& name) const {
  auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) {
    throw ValidationError("unknown feature '" + name + "'");
  }
  return static_cast<size_t>(it - feature_names.begin());
}

Table Table::select_rows(const std::vector<size_t>& rows) const {
  Table out;
  out.feature_names = feature_names;
  out.ids.reserve(rows.size());
  for (size_t i : rows) {
    if (i >= n_rows()) throw ValidationError("row index out of range");
    out.ids.push_back(ids[i]);
  }
  out.columns.resize(n_cols());
  for (size_t j = 0; j < n_cols(); ++j) {
    out.columns[j].reserve(rows.size());
    for (size_t i : rows) out.columns[j].push_back(columns[j][i]);
  }
  if (labels) {
    std::vector<double> y;
    y.reserve(rows.size());
    for (size_t i : rows) y.push_back((*labels)[i]);
    out.labels = std::move(y);
  }
  return out;
}

Table load_csv(const std::string& path, bool has_label,
               const std::string& id_column, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open csv file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty csv: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_line(line);
  size_t id_pos = header.size();
  size_t label_pos = header.size();
  for (size_t j = 0; j < header.size(); ++j) {
    if (header[j] == id_column) {
      if (id_pos != header.size()) {
        throw ValidationError("duplicate id column '" + id_column + "'");
      }
      id_pos = j;
    } else if (has_label && header[j] == label_column) {
      if (label_pos != header.size()) {
        throw ValidationError("duplicate label column '" + label_column + "'");
      }
      label_pos = j;
    }
  }
  if (id_pos == header.size()) {
    throw ValidationError("csv missing id column '" + id_column + "': " +
                          path);
  }
  if (has_label && label_pos == header.size()) {
    throw ValidationError("csv missing label column '" + label_column +
                          "': " + path);
  }

  Table table;
  for (size_t j = 0; j < header.size(); ++j) {
    if (j == id_pos || j == label_pos) continue;
    table.feature_names.push_back(header[j]);
  }
  table.columns.resize(table.feature_names.size());
  if (has_label) table.labels.emplace();

  std::unordered_set<std::string> seen_ids;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) {
      throw ValidationError("csv line " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
    }
    if (!seen_ids.insert(cells[id_pos]).second) {
      throw ValidationError("duplicate id '" + cells[id_pos] + "' at line " +
                            std::to_string(line_no));
    }
    table.ids.push_back(cells[id_pos]);
    size_t feat = 0;
    for (size_t j = 0; j < cells.size(); ++j) {
      if (j == id_pos) continue;
      if (has_label && j == label_pos) {
        table.labels->push_back(parse_number(cells[j], line_no, j));
      } else {
        table.columns[feat++].push_back(parse_number(cells[j], line_no, j));
      }
    }
  }
  table.validate();
  return table;
}

void save_csv(const Table& table, const std::string& path,
              const std::string& id_column, const std::string& label_column) {
  table.validate();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write csv file: " + path);

  out << id_column;
  for (const auto& name : table.feature_names) out << ',' << name;
  if (table.labels) out << ',' << label_column;
  out << '\n';

  for (size_t i = 0; i < table.n_rows(); ++i) {
    out << table.ids[i];
    for (size_t j = 0; j < table.n_cols(); ++j) {
      out << ',' << format_number(table.columns[j][i]);
    }
    if (table.labels) out << ',' << format_number((*table.labels)[i]);
    out << '\n';
  }
  if (!out) throw IoError("failed while writing csv file: " + path);
}

}  // namespace xfl::data
