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

#include "xfl/horizontal/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "xfl/common/error.hpp"

namespace xfl::horizontal {

Aggregator aggregator_from_name(const std::string& name) {
  if (name == "fedavg") return Aggregator::kFedAvg;
  if (name == "fedprox") return Aggregator::kFedProx;
  if (name == "scaffold") return Aggregator::kScaffold;
  throw ValidationError("unknown aggregator '" + name +
                        "' (expected fedavg, fedprox, or scaffold)");
}

std::string aggregator_name(Aggregator a) {
  switch (a) {
    case Aggregator::kFedAvg: return "fedavg";
    case Aggregator::kFedProx: return "fedprox";
    case Aggregator::kScaffold: return "scaffold";
  }
  throw ValidationError("unknown aggregator enum value");
}

void TrainConfig::validate() const {
  if (global_epochs < 1) throw ValidationError("global_epochs must be >= 1");
  if (local_epochs < 1) throw ValidationError("local_epochs must be >= 1");
  if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("learning_rate must be finite and >= 0");
  }
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw ValidationError("mu must be finite and >= 0");
  }
}

LocalTrainResult local_train(const ModelSpec& spec, const ModelState& global,
                             const data::Table& table, const TrainConfig& cfg,
                             const ScaffoldState* scaffold) {
  cfg.validate();
  table.validate();
  if (table.n_rows() == 0) throw ValidationError("cannot train on no rows");
  if (cfg.aggregator == Aggregator::kScaffold) {
    if (scaffold == nullptr) {
      throw ValidationError("scaffold aggregator needs control variates");
    }
    require_same_layout(scaffold->c_global, global);
    require_same_layout(scaffold->c_local, global);
  }

  const bool proximal =
      cfg.aggregator == Aggregator::kFedProx && cfg.mu != 0.0;

  LocalTrainResult result;
  result.state = global;
  result.sample_count = table.n_rows();

  std::vector<size_t> order(table.n_rows());
  std::iota(order.begin(), order.end(), size_t{0});
  std::mt19937_64 rng(cfg.seed);
  const size_t batch =
      std::min<size_t>(static_cast<size_t>(cfg.batch_size), order.size());

  for (int epoch = 0; epoch < cfg.local_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    size_t epoch_batches = 0;
    for (size_t start = 0; start < order.size(); start += batch) {
      const size_t len = std::min(batch, order.size() - start);
      GradResult g = model_grad(spec, result.state, table,
                                std::span<const size_t>(&order[start], len));
      if (!std::isfinite(g.loss)) {
        throw Error("training diverged: non-finite loss at epoch " +
                    std::to_string(epoch) + ", step " +
                    std::to_string(result.steps) + " (lower the learning rate)");
      }
      if (proximal) {
        // g += mu * (w - w_global)
        axpy(g.grad, cfg.mu, result.state);
        axpy(g.grad, -cfg.mu, global);
      } else if (cfg.aggregator == Aggregator::kScaffold) {
        axpy(g.grad, 1.0, scaffold->c_global);
        axpy(g.grad, -1.0, scaffold->c_local);
      }
      axpy(result.state, -cfg.learning_rate, g.grad);
      epoch_loss += g.loss;
      ++epoch_batches;
      ++result.steps;
    }
    result.mean_loss = epoch_loss / static_cast<double>(epoch_batches);
  }
  return result;
}

ModelState fedprox_correction(const ModelState& grad, const ModelState& w,
                              const ModelState& w_global, double mu) {
  require_same_layout(grad, w);
  require_same_layout(grad, w_global);
  ModelState out = grad;
  axpy(out, mu, w);
  axpy(out, -mu, w_global);
  return out;
}

std::pair<ModelState, ModelState> scaffold_update_controls(
    const ModelState& c_local, const ModelState& c_global,
    const ModelState& w_global, const ModelState& w_local, size_t steps,
    double learning_rate) {
  if (steps < 1) throw ValidationError("scaffold update needs steps >= 1");
  if (!(learning_rate > 0.0)) {
    throw ValidationError("scaffold update needs learning_rate > 0");
  }
  require_same_layout(c_local, c_global);
  require_same_layout(c_local, w_global);
  require_same_layout(c_local, w_local);

  const double inv_klr =
      1.0 / (static_cast<double>(steps) * learning_rate);
  ModelState next = c_local;
  axpy(next, -1.0, c_global);
  axpy(next, inv_klr, w_global);
  axpy(next, -inv_klr, w_local);

  ModelState delta = next;
  axpy(delta, -1.0, c_local);
  return {std::move(next), std::move(delta)};
}

ModelState aggregate_weighted(
    const std::vector<std::pair<ModelState, double>>& states) {
  if (states.empty()) throw ValidationError("nothing to aggregate");
  double total = 0.0;
  for (const auto& [state, count] : states) {
    require_same_layout(state, states.front().first);
    if (!(count > 0.0)) {
      throw ValidationError("aggregation weights must be positive");
    }
    total += count;
  }
  ModelState out = zeros_like(states.front().first);
  for (const auto& [state, count] : states) {
    axpy(out, count / total, state);
  }
  return out;
}

}  // namespace xfl::horizontal
