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
#include <map>
#include <string>
#include <vector>

#include "xfl/data/table.hpp"

namespace xfl::data {

// Horizontal partition of rows across parties.
struct PartitionSpec {
  enum class Kind { kRandom, kDirichlet };

  Kind kind = Kind::kRandom;
  size_t n_parties = 0;
  double beta = 0.5;  // Dirichlet concentration; smaller => more skew.
  uint64_t seed = 0;

  void validate() const;
};

// Returns per-party row indices: disjoint, covering, each party non-empty.
// kRandom shuffles rows and deals them round-robin. kDirichlet draws, for
// each label class, party proportions from Dirichlet(beta) and slices that
// class's shuffled rows accordingly (resampling a bounded number of times if
// some party would end up empty overall).
std::vector<std::vector<size_t>> dirichlet_partition(
    const std::vector<double>& labels, const PartitionSpec& spec);

// Convenience: partition a labeled table into per-party tables.
std::vector<Table> partition_table(const Table& table,
                                   const PartitionSpec& spec);

// Vertical split: every party receives all rows but only its assigned
// feature columns; the label stays with label_party alone. The assignment
// must cover each feature exactly once and name only non-empty parties.
std::map<std::string, Table> vertical_split(
    const Table& table,
    const std::map<std::string, std::vector<std::string>>& assignment,
    const std::string& label_party);

// Seeded shuffle then split at ratio (train fraction); both sides non-empty.
std::pair<Table, Table> data_split(const Table& table, double train_ratio,
                                   uint64_t seed);

}  // namespace xfl::data
