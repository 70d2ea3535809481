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
#include <optional>
#include <vector>

#include "xfl/data/table.hpp"
#include "xfl/horizontal/model.hpp"
#include "xfl/horizontal/train.hpp"
#include "xfl/numeric/fixed_point.hpp"
#include "xfl/secagg/secagg.hpp"
#include "xfl/transport/endpoint.hpp"

namespace xfl::horizontal {

// Global-model broadcasts travel on this stage; masked updates reuse the
// secure-aggregation stage. Round r masks the model update with mask round
// 2r and (for Scaffold) the control-variate delta with 2r + 1, so the two
// vectors of one round never share a pad.
inline constexpr char kStageGlobalModel[] = "horizontal/global_model";

struct HorizontalConfig {
  ModelSpec model;
  TrainConfig train;
  numeric::FixedPointParams fp{};
  transport::Duration round_timeout{120000};
};

// One round's broadcast from the assist trainer.
struct RoundMessage {
  int round = 0;
  bool done = false;
  ModelState model;
  std::optional<ModelState> c_global;  // Scaffold only

  Bytes encode() const;
  static RoundMessage decode(const Bytes& payload);
};

// [count * params ..., count] — aggregating this through the masked ring
// yields the weighted sum and the total count in one pass, so the
// aggregator learns neither any party's update nor its sample count.
numeric::RingVector weighted_update_vector(const ModelState& state,
                                           size_t count,
                                           const numeric::FixedPointParams& fp);

// Splits the decoded ring sum back into (weighted parameter sums, total
// count). Throws if the total is not positive.
std::pair<std::vector<double>, double> split_weighted_sum(
    const numeric::RingVector& ring_sum, size_t param_len);

// Snaps every coordinate onto the fixed-point grid (encode/decode round
// trip). Scaffold control deltas are snapped before use so that the ring
// aggregate and each party's local bookkeeping agree exactly.
ModelState quantize_state(const ModelState& state,
                          const numeric::FixedPointParams& fp);

using AssistRoundHook =
    std::function<void(int round, const ModelState& global)>;
using TrainerRoundHook = std::function<void(
    int round, const ModelState& global, const LocalTrainResult& local)>;

// Aggregator side of the three-step loop: broadcast model, gather masked
// updates, unmask the sum only. Runs cfg.train.global_epochs rounds, then a
// final "done" broadcast. Returns the final global model. When running
// Scaffold, *c_global_out (if given) receives the final server control.
ModelState run_horizontal_assist(transport::Endpoint& ep,
                                 const std::vector<transport::PartyId>& trainers,
                                 const HorizontalConfig& cfg,
                                 const AssistRoundHook& on_round = {},
                                 ModelState* c_global_out = nullptr);

// Trainer side: receive the model, train locally, send the masked weighted
// update (and, for Scaffold, the masked control delta). Loops until the
// assist trainer broadcasts done; returns the final global model. When
// running Scaffold, *c_local_out (if given) receives the final local
// control.
ModelState run_horizontal_trainer(transport::Endpoint& ep,
                                  const transport::PartyId& assist,
                                  const secagg::MaskPlan& plan,
                                  const data::Table& table,
                                  const HorizontalConfig& cfg,
                                  const TrainerRoundHook& on_round = {},
                                  ModelState* c_local_out = nullptr);

}  // namespace xfl::horizontal
