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

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace xfl::data {

// Column-major dataset: ids align rows across parties, features are real
// columns, labels are present only on the label-holding side.
struct Table {
  std::vector<std::string> ids;
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> columns;  // columns[j][i]: feature j, row i
  std::optional<std::vector<double>> labels;

  size_t n_rows() const { return ids.size(); }
  size_t n_cols() const { return feature_names.size(); }

  // Column lengths equal id count; feature names unique; labels (if any)
  // equal id count. Throws ValidationError.
  void validate() const;

  // Row access helper: feature vector of one row.
  std::vector<double> row(size_t i) const;

  // Index of a named feature; throws ValidationError when absent.
  size_t feature_index(const std::string& name) const;

  // Keeps the given rows (in the given order).
  Table select_rows(const std::vector<size_t>& rows) const;
};

// CSV with a header row; `id_column` anywhere in the header; when has_label,
// a `label_column` must be present. Every other column is a numeric feature.
Table load_csv(const std::string& path, bool has_label,
               const std::string& id_column = "id",
               const std::string& label_column = "y");

// Canonical output: id, features in order, label last; shortest-roundtrip
// number formatting. save(load(f)) == save(load(save(load(f)))).
void save_csv(const Table& table, const std::string& path,
              const std::string& id_column = "id",
              const std::string& label_column = "y");

}  // namespace xfl::data
