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

#include "xfl/data/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "xfl/common/error.hpp"

namespace xfl::data {

ScalerParams standard_scaler(Table& table, bool with_mean, bool with_std) {
  table.validate();
  if (table.n_rows() == 0) throw ValidationError("cannot scale empty table");

  ScalerParams params;
  params.mean.resize(table.n_cols());
  params.std_dev.resize(table.n_cols());
  const double n = static_cast<double>(table.n_rows());
  for (size_t j = 0; j < table.n_cols(); ++j) {
    double sum = 0.0;
    for (double v : table.columns[j]) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : table.columns[j]) ss += (v - mean) * (v - mean);
    params.mean[j] = mean;
    params.std_dev[j] = std::sqrt(ss / n);
  }
  apply_scaler(table, params, with_mean, with_std);
  return params;
}

void apply_scaler(Table& table, const ScalerParams& params, bool with_mean,
                  bool with_std) {
  table.validate();
  if (params.mean.size() != table.n_cols() ||
      params.std_dev.size() != table.n_cols()) {
    throw ValidationError("scaler parameters do not match table width");
  }
  for (size_t j = 0; j < table.n_cols(); ++j) {
    const double mean = with_mean ? params.mean[j] : 0.0;
    const double std_dev = params.std_dev[j];
    const double scale = (with_std && std_dev > 0.0) ? 1.0 / std_dev : 1.0;
    for (double& v : table.columns[j]) v = (v - mean) * scale;
  }
}

void normalization(Table& table, Axis axis, Norm norm) {
  table.validate();
  auto magnitude = [norm](const double* values, size_t count, size_t stride) {
    double acc = 0.0;
    for (size_t i = 0; i < count; ++i) {
      const double a = std::fabs(values[i * stride]);
      switch (norm) {
        case Norm::kL1: acc += a; break;
        case Norm::kL2: acc += a * a; break;
        case Norm::kMax: acc = std::max(acc, a); break;
      }
    }
    return norm == Norm::kL2 ? std::sqrt(acc) : acc;
  };

  if (axis == Axis::kColumn) {
    for (auto& col : table.columns) {
      const double m = magnitude(col.data(), col.size(), 1);
      if (m > 0.0) {
        for (double& v : col) v /= m;
      }
    }
    return;
  }

  // Row-wise: gather each row across columns.
  std::vector<double> row(table.n_cols());
  for (size_t i = 0; i < table.n_rows(); ++i) {
    for (size_t j = 0; j < table.n_cols(); ++j) row[j] = table.columns[j][i];
    const double m = magnitude(row.data(), row.size(), 1);
    if (m > 0.0) {
      for (size_t j = 0; j < table.n_cols(); ++j) table.columns[j][i] /= m;
    }
  }
}

std::vector<double> equal_frequency_binning(const std::vector<double>& column,
                                            size_t max_bins) {
  if (max_bins < 1) throw ValidationError("max_bins must be >= 1");
  if (column.empty()) throw ValidationError("cannot bin an empty column");

  std::vector<double> sorted = column;
  std::sort(sorted.begin(), sorted.end());
  const size_t n = sorted.size();

  std::vector<double> splits;
  for (size_t k = 1; k < max_bins; ++k) {
    // Boundary after ceil(k*n/max_bins) values; split halfway between the
    // last value on the left and the first on the right.
    const size_t m = (k * n + max_bins - 1) / max_bins;
    if (m == 0 || m >= n) continue;
    if (sorted[m - 1] == sorted[m]) continue;  // no gap to split in
    const double split = sorted[m - 1] + (sorted[m] - sorted[m - 1]) / 2.0;
    if (!splits.empty() && split <= splits.back()) continue;
    splits.push_back(split);
  }
  return splits;
}

size_t BinMap::bin_of(size_t feature, double value) const {
  if (feature >= splits.size()) {
    throw ValidationError("bin map feature index out of range");
  }
  const auto& s = splits[feature];
  return static_cast<size_t>(std::upper_bound(s.begin(), s.end(), value) -
                             s.begin());
}

BinMap build_bin_map(const Table& table, size_t max_bins) {
  table.validate();
  BinMap map;
  map.max_bins = max_bins;
  map.splits.reserve(table.n_cols());
  for (const auto& col : table.columns) {
    map.splits.push_back(equal_frequency_binning(col, max_bins));
  }
  return map;
}

}  // namespace xfl::data
