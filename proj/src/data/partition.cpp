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

#include "xfl/data/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <unordered_set>

#include "xfl/common/error.hpp"

namespace xfl::data {

namespace {

constexpr int kMaxDirichletRetries = 64;

std::vector<double> dirichlet_draw(size_t k, double beta,
                                   std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(beta, 1.0);
  std::vector<double> draw(k);
  double total = 0.0;
  for (double& g : draw) {
    g = gamma(rng);
    total += g;
  }
  if (total <= 0.0) {
    // All-zero draws can occur for tiny beta; fall back to a uniform split.
    std::fill(draw.begin(), draw.end(), 1.0 / static_cast<double>(k));
    return draw;
  }
  for (double& g : draw) g /= total;
  return draw;
}

// Slices `items` into k contiguous chunks with sizes proportional to `p`
// (cumulative rounding so sizes sum exactly to items.size()).
void deal_proportional(const std::vector<size_t>& items,
                       const std::vector<double>& p,
                       std::vector<std::vector<size_t>>& parts) {
  const size_t n = items.size();
  size_t taken = 0;
  double cum = 0.0;
  for (size_t j = 0; j < p.size(); ++j) {
    cum += p[j];
    size_t upto = (j + 1 == p.size())
                      ? n
                      : std::min(n, static_cast<size_t>(std::llround(
                                        cum * static_cast<double>(n))));
    for (; taken < upto; ++taken) parts[j].push_back(items[taken]);
  }
}

}  // namespace

void PartitionSpec::validate() const {
  if (n_parties < 1) throw ValidationError("partition needs n_parties >= 1");
  if (kind == Kind::kDirichlet && !(beta > 0.0)) {
    throw ValidationError("dirichlet partition needs beta > 0");
  }
}

std::vector<std::vector<size_t>> dirichlet_partition(
    const std::vector<double>& labels, const PartitionSpec& spec) {
  spec.validate();
  const size_t n = labels.size();
  if (n < spec.n_parties) {
    throw ValidationError("cannot partition " + std::to_string(n) +
                          " rows across " + std::to_string(spec.n_parties) +
                          " parties");
  }

  std::mt19937_64 rng(spec.seed);

  if (spec.kind == PartitionSpec::Kind::kRandom) {
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<size_t>> parts(spec.n_parties);
    for (size_t i = 0; i < n; ++i) parts[i % spec.n_parties].push_back(order[i]);
    for (auto& part : parts) std::sort(part.begin(), part.end());
    return parts;
  }

  // Group row indices by class label.
  std::map<double, std::vector<size_t>> by_class;
  for (size_t i = 0; i < n; ++i) by_class[labels[i]].push_back(i);

  for (int attempt = 0; attempt < kMaxDirichletRetries; ++attempt) {
    std::vector<std::vector<size_t>> parts(spec.n_parties);
    for (auto& [label, indices] : by_class) {
      std::vector<size_t> shuffled = indices;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      const std::vector<double> p =
          dirichlet_draw(spec.n_parties, spec.beta, rng);
      deal_proportional(shuffled, p, parts);
    }
    const bool all_nonempty =
        std::all_of(parts.begin(), parts.end(),
                    [](const std::vector<size_t>& part) { return !part.empty(); });
    if (all_nonempty) {
      for (auto& part : parts) std::sort(part.begin(), part.end());
      return parts;
    }
  }
  throw ValidationError(
      "dirichlet partition left a party empty after " +
      std::to_string(kMaxDirichletRetries) +
      " attempts; use more rows, fewer parties, or a larger beta");
}

std::vector<Table> partition_table(const Table& table,
                                   const PartitionSpec& spec) {
  table.validate();
  if (!table.labels) {
    throw ValidationError("partition_table requires a labeled table");
  }
  const auto parts = dirichlet_partition(*table.labels, spec);
  std::vector<Table> out;
  out.reserve(parts.size());
  for (const auto& rows : parts) out.push_back(table.select_rows(rows));
  return out;
}

std::map<std::string, Table> vertical_split(
    const Table& table,
    const std::map<std::string, std::vector<std::string>>& assignment,
    const std::string& label_party) {
  table.validate();
  if (assignment.empty()) {
    throw ValidationError("vertical split needs at least one party");
  }
  if (assignment.find(label_party) == assignment.end()) {
    throw ValidationError("label party '" + label_party +
                          "' missing from vertical assignment");
  }
  if (!table.labels) {
    throw ValidationError("vertical split requires a labeled table");
  }

  std::unordered_set<std::string> assigned;
  for (const auto& [party, features] : assignment) {
    if (features.empty() && party != label_party) {
      throw ValidationError("party '" + party +
                            "' has no features in vertical assignment");
    }
    for (const auto& f : features) {
      table.feature_index(f);  // throws on unknown feature
      if (!assigned.insert(f).second) {
        throw ValidationError("feature '" + f +
                              "' assigned to more than one party");
      }
    }
  }
  if (assigned.size() != table.n_cols()) {
    for (const auto& name : table.feature_names) {
      if (assigned.find(name) == assigned.end()) {
        throw ValidationError("feature '" + name +
                              "' not assigned to any party");
      }
    }
  }

  std::map<std::string, Table> out;
  for (const auto& [party, features] : assignment) {
    Table t;
    t.ids = table.ids;
    for (const auto& f : features) {
      t.feature_names.push_back(f);
      t.columns.push_back(table.columns[table.feature_index(f)]);
    }
    if (party == label_party) t.labels = table.labels;
    t.validate();
    out.emplace(party, std::move(t));
  }
  return out;
}

std::pair<Table, Table> data_split(const Table& table, double train_ratio,
                                   uint64_t seed) {
  table.validate();
  if (!(train_ratio > 0.0) || !(train_ratio < 1.0)) {
    throw ValidationError("train ratio must lie strictly between 0 and 1");
  }
  const size_t n = table.n_rows();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const size_t n_train =
      static_cast<size_t>(std::llround(train_ratio * static_cast<double>(n)));
  if (n_train == 0 || n_train == n) {
    throw ValidationError("split ratio " + std::to_string(train_ratio) +
                          " leaves one side of " + std::to_string(n) +
                          " rows empty");
  }
  std::vector<size_t> train(order.begin(), order.begin() + n_train);
  std::vector<size_t> test(order.begin() + n_train, order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {table.select_rows(train), table.select_rows(test)};
}

}  // namespace xfl::data
