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

#include <cstdint>
#include <vector>

#include "xfl/data/table.hpp"

namespace xfl::data {

// Fitted standardization parameters (population statistics).
struct ScalerParams {
  std::vector<double> mean;
  std::vector<double> std_dev;  // zero-variance columns keep std_dev == 0
};

// Centers and/or scales each feature column in place:
//   x' = (x - mean) / std  (population std; zero-variance columns are only
//   centered, never divided). Returns the fitted parameters so the same
//   transform can be applied to held-out data.
ScalerParams standard_scaler(Table& table, bool with_mean = true,
                             bool with_std = true);

// Applies previously fitted parameters to another table (same columns).
void apply_scaler(Table& table, const ScalerParams& params, bool with_mean,
                  bool with_std);

enum class Axis { kRow, kColumn };
enum class Norm { kL1, kL2, kMax };

// Scales each row (or column) to unit norm; all-zero vectors are left
// unchanged.
void normalization(Table& table, Axis axis, Norm norm);

// Equal-frequency binning of one column: up to max_bins bins delimited by
// split points placed halfway between neighboring sorted values at the
// quantile boundaries. Duplicate candidates collapse, so fewer than
// max_bins - 1 splits may come back; a constant column yields none.
std::vector<double> equal_frequency_binning(const std::vector<double>& column,
                                            size_t max_bins);

// Split points for every feature of a table.
struct BinMap {
  std::vector<std::vector<double>> splits;  // splits[j] ascending, per feature
  size_t max_bins = 0;

  size_t n_bins(size_t feature) const { return splits[feature].size() + 1; }
  // Bin index of a value: the number of split points at or below it.
  size_t bin_of(size_t feature, double value) const;
};

BinMap build_bin_map(const Table& table, size_t max_bins = 32);

}  // namespace xfl::data
