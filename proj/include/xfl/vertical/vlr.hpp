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
#include <string>
#include <vector>

#include "xfl/crypto/rng.hpp"
#include "xfl/data/metrics.hpp"
#include "xfl/data/table.hpp"
#include "xfl/transport/endpoint.hpp"

namespace xfl::vertical {

// Protocol stages of vertical logistic regression.
inline constexpr char kStagePartialScore[] = "vlr/partial_score";
inline constexpr char kStageEncResidual[] = "vlr/enc_residual";
inline constexpr char kStageEncGrad[] = "vlr/enc_grad";
inline constexpr char kStageMaskedGrad[] = "vlr/masked_grad";

// Mini-batch logistic regression over vertically partitioned features.
// Each step the feature holders send plaintext partial scores X_k w_k, the
// label holder forms residuals d = sigmoid(z) - y, encrypts them, and the
// feature holders reply with additively masked encrypted gradients, so the
// label holder never sees a raw per-feature gradient and the feature
// holders never see residuals or labels.
struct VlrParams {
  int epochs = 1;
  size_t batch_size = 2048;
  double learning_rate = 0.1;
  uint32_t key_bits = 1024;
  int32_t scale_bits = 40;  // fixed-point scale of residuals and features
  transport::Duration stage_timeout{120000};
  uint64_t seed = 0;

  void validate() const;
};

struct VlrModel {
  std::vector<double> weights;  // this party's own feature weights
  double intercept = 0.0;       // used by the label trainer only

  std::string to_json() const;
  static VlrModel from_json(const std::string& text);
};

struct VlrResult {
  VlrModel model;
  std::vector<double> train_scores;  // label trainer only: probabilities
};

using VlrEpochHook = std::function<void(int epoch, const data::MetricsReport&)>;

// Label-holder side. Metrics passed to `on_epoch` are computed from the
// within-epoch batch scores (the model moves between batches).
VlrResult run_vlr_label_trainer(transport::Endpoint& ep,
                                const std::vector<transport::PartyId>& trainers,
                                const data::Table& table,
                                const VlrParams& params,
                                crypto::RandomSource& rng,
                                const VlrEpochHook& on_epoch = {});

// Feature-holder side; `rng` feeds the gradient masks. A trainer with zero
// feature columns participates in every round with empty vectors.
VlrResult run_vlr_trainer(transport::Endpoint& ep,
                          const transport::PartyId& label_trainer,
                          const data::Table& table, const VlrParams& params,
                          crypto::RandomSource& rng);

}  // namespace xfl::vertical
