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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xfl/data/metrics.hpp"
#include "xfl/data/preprocess.hpp"
#include "xfl/data/table.hpp"
#include "xfl/transport/endpoint.hpp"
#include "xfl/vertical/boost.hpp"

namespace xfl::vertical {

// Protocol stages of the boosted-tree training loop.
inline constexpr char kStageEncGrads[] = "vxgb/enc_grads";
inline constexpr char kStageHist[] = "vxgb/hist";
inline constexpr char kStageSplit[] = "vxgb/split";
inline constexpr char kStagePartition[] = "vxgb/partition";

struct VxgbParams {
  int num_trees = 2;
  int depth = 2;  // split levels per tree; leaves sit at this depth
  double learning_rate = 0.3;
  double lambda = 1.0;
  double gamma = 0.0;
  std::optional<GossSpec> goss;
  uint32_t key_bits = 1024;
  size_t max_bins = 32;
  crypto::PackParams pack{};
  transport::Duration stage_timeout{120000};
  uint64_t seed = 0;

  void validate() const;
};

// Nodes use heap ids: root 0, children of i at 2i+1 / 2i+2. Internal nodes
// name the owner and an opaque split_ref whose meaning (feature, threshold)
// only the owner knows; leaves carry the learning-rate-scaled weight.
struct TreeNode {
  int id = 0;
  std::string owner;
  uint64_t split_ref = 0;
  int left = -1;
  int right = -1;
  std::optional<double> leaf_weight;
};

struct TreeModel {
  int depth = 0;
  std::vector<TreeNode> nodes;  // ascending id

  const TreeNode* find(int id) const;
  std::string to_json() const;
  static TreeModel from_json(const std::string& text);
};

// The owner-private meaning of a split_ref. Samples go left when
// value < threshold (equivalently: bin id <= bin).
struct SplitRule {
  uint32_t feature = 0;
  uint32_t bin = 0;
  double threshold = 0.0;
};
using SplitBook = std::map<uint64_t, SplitRule>;

struct VxgbResult {
  std::vector<TreeModel> trees;      // label trainer only
  SplitBook book;                    // this party's private split rules
  std::vector<double> train_scores;  // label trainer only: raw margins
  CipherOpCounters counters;         // homomorphic additions performed here
};

using TreeHook = std::function<void(int tree, const data::MetricsReport&)>;

// Label-trainer side: owns labels and the Paillier keypair; encrypts packed
// gradient pairs, decrypts only histogram sums, never sees other parties'
// feature values or thresholds.
VxgbResult run_vxgb_label_trainer(transport::Endpoint& ep,
                                  const std::vector<transport::PartyId>& trainers,
                                  const data::Table& table,
                                  const VxgbParams& params,
                                  crypto::RandomSource& rng,
                                  const TreeHook& on_tree = {});

// Feature-holder side: accumulates ciphertext histograms over its own bins
// and partitions nodes it wins; learns neither gradients nor labels.
// `all_parties` lists every protocol participant (label trainer included);
// partitions of won nodes are broadcast to all of them.
VxgbResult run_vxgb_trainer(transport::Endpoint& ep,
                            const transport::PartyId& label_trainer,
                            const std::vector<transport::PartyId>& all_parties,
                            const data::Table& table,
                            const VxgbParams& params);

// Federated inference: the label trainer walks each tree, asking the owner
// of every internal node to partition the surviving sample set by its
// private rule. Returns probabilities (label trainer side).
std::vector<double> run_vxgb_predict_label(
    transport::Endpoint& ep, const std::vector<transport::PartyId>& trainers,
    const std::vector<TreeModel>& trees, const SplitBook& own_book,
    const data::Table& table, const VxgbParams& params);

// Trainer side of inference: answers exactly num_trees * depth partition
// queries (possibly empty) against the given table.
void run_vxgb_predict_helper(transport::Endpoint& ep,
                             const transport::PartyId& label_trainer,
                             const SplitBook& book, const data::Table& table,
                             const VxgbParams& params);

}  // namespace xfl::vertical
