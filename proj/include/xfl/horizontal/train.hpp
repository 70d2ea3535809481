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
#include <utility>
#include <vector>

#include "xfl/horizontal/model.hpp"

namespace xfl::horizontal {

enum class Aggregator { kFedAvg, kFedProx, kScaffold };

Aggregator aggregator_from_name(const std::string& name);
std::string aggregator_name(Aggregator a);

struct TrainConfig {
  int global_epochs = 1;
  int local_epochs = 1;
  int batch_size = 32;
  double learning_rate = 0.1;
  Aggregator aggregator = Aggregator::kFedAvg;
  double mu = 0.005;  // FedProx proximal coefficient; ignored otherwise
  uint64_t seed = 0;

  void validate() const;
};

// Scaffold control variates: the shared server control and this party's
// local control, both in the model layout and zero-initialized.
struct ScaffoldState {
  ModelState c_global;
  ModelState c_local;
};

struct LocalTrainResult {
  ModelState state;
  size_t sample_count = 0;
  size_t steps = 0;      // SGD steps taken (the K in Scaffold's update)
  double mean_loss = 0;  // mean batch loss over the final local epoch
};

// Mini-batch SGD from `global` for cfg.local_epochs epochs with seeded
// shuffling. FedProx adds mu*(w - w_global) to every step's gradient (only
// when mu != 0, so mu = 0 runs the FedAvg code path bit-for-bit); Scaffold
// adds c_global - c_local. Throws Error if the loss turns non-finite.
LocalTrainResult local_train(const ModelSpec& spec, const ModelState& global,
                             const data::Table& table, const TrainConfig& cfg,
                             const ScaffoldState* scaffold = nullptr);

// grad' = grad + mu * (w - w_global): gradient of the proximal term
// mu/2 * ||w - w_global||^2 added to the local objective.
ModelState fedprox_correction(const ModelState& grad, const ModelState& w,
                              const ModelState& w_global, double mu);

// Scaffold option-II control refresh after K local steps of size lr:
//   c_local' = c_local - c_global + (w_global - w_local) / (K * lr)
// Returns (c_local', delta) with delta = c_local' - c_local; the server
// adds the party-mean of deltas to c_global.
std::pair<ModelState, ModelState> scaffold_update_controls(
    const ModelState& c_local, const ModelState& c_global,
    const ModelState& w_global, const ModelState& w_local, size_t steps,
    double learning_rate);

// Parameter-wise weighted mean, weights proportional to sample counts.
ModelState aggregate_weighted(
    const std::vector<std::pair<ModelState, double>>& states);

}  // namespace xfl::horizontal
