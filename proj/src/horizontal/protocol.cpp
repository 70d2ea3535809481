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

#include "xfl/horizontal/protocol.hpp"

#include <json.hpp>

#include "xfl/common/error.hpp"
#include "xfl/common/seed_mix.hpp"

namespace xfl::horizontal {

using transport::PartyId;

Bytes RoundMessage::encode() const {
  nlohmann::json j;
  j["round"] = round;
  j["done"] = done;
  j["model"] = nlohmann::json::parse(model.to_json());
  if (c_global) j["c_global"] = nlohmann::json::parse(c_global->to_json());
  const std::string text = j.dump();
  return Bytes(text.begin(), text.end());
}

RoundMessage RoundMessage::decode(const Bytes& payload) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(payload.begin(), payload.end());
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("bad round message: ") + e.what());
  }
  if (!j.contains("round") || !j.contains("done") || !j.contains("model")) {
    throw ProtocolError("round message missing round/done/model");
  }
  RoundMessage msg;
  msg.round = j["round"].get<int>();
  msg.done = j["done"].get<bool>();
  msg.model = ModelState::from_json(j["model"].dump());
  if (j.contains("c_global")) {
    msg.c_global = ModelState::from_json(j["c_global"].dump());
  }
  return msg;
}

numeric::RingVector weighted_update_vector(
    const ModelState& state, size_t count,
    const numeric::FixedPointParams& fp) {
  if (count == 0) throw ValidationError("update needs a positive count");
  std::vector<double> flat = state.flatten();
  const double weight = static_cast<double>(count);
  for (double& v : flat) v *= weight;
  flat.push_back(weight);
  return numeric::RingVector::encode(flat, fp);
}

std::pair<std::vector<double>, double> split_weighted_sum(
    const numeric::RingVector& ring_sum, size_t param_len) {
  if (ring_sum.size() != param_len + 1) {
    throw ProtocolError("aggregated vector length " +
                        std::to_string(ring_sum.size()) +
                        " does not match model size " +
                        std::to_string(param_len) + " plus count slot");
  }
  std::vector<double> decoded = ring_sum.decode();
  const double total = decoded.back();
  decoded.pop_back();
  if (!(total > 0.0)) {
    throw ProtocolError("aggregated sample count is not positive");
  }
  return {std::move(decoded), total};
}

ModelState quantize_state(const ModelState& state,
                          const numeric::FixedPointParams& fp) {
  ModelState out = state;
  for (auto& e : out.entries) {
    for (double& v : e.values) {
      v = numeric::fp_decode(numeric::fp_encode(v, fp), fp);
    }
  }
  return out;
}

namespace {

std::vector<secagg::MaskedVector> gather_masked(
    transport::Endpoint& ep, const std::vector<PartyId>& trainers,
    uint64_t mask_round, transport::Duration timeout) {
  const auto raw =
      ep.gather(trainers, secagg::kStageMaskedUpdate, timeout);
  std::vector<secagg::MaskedVector> vectors;
  vectors.reserve(raw.size());
  for (const auto& [party, payload] : raw) {
    BinaryReader reader(payload);
    secagg::MaskedVector mv = secagg::MaskedVector::deserialize(reader);
    if (mv.round != mask_round) {
      throw ProtocolError("party " + party.name + " sent mask round " +
                          std::to_string(mv.round) + ", expected " +
                          std::to_string(mask_round));
    }
    if (mv.sender.name != party.name) {
      throw ProtocolError("masked update sender '" + mv.sender.name +
                          "' does not match stream origin '" + party.name +
                          "'");
    }
    vectors.push_back(std::move(mv));
  }
  return vectors;
}

}  // namespace

ModelState run_horizontal_assist(transport::Endpoint& ep,
                                 const std::vector<PartyId>& trainers,
                                 const HorizontalConfig& cfg,
                                 const AssistRoundHook& on_round,
                                 ModelState* c_global_out) {
  cfg.model.validate();
  cfg.train.validate();
  if (trainers.empty()) throw ValidationError("no trainers to aggregate");
  const bool scaffold = cfg.train.aggregator == Aggregator::kScaffold;

  ModelState global = init_model(cfg.model);
  ModelState c_global = zeros_like(global);
  const size_t param_len = global.total_size();

  for (int round = 0; round < cfg.train.global_epochs; ++round) {
    RoundMessage msg;
    msg.round = round;
    msg.done = false;
    msg.model = global;
    if (scaffold) msg.c_global = c_global;
    ep.broadcast(trainers, kStageGlobalModel, msg.encode());

    auto vectors = gather_masked(ep, trainers,
                                 static_cast<uint64_t>(2 * round),
                                 cfg.round_timeout);
    const numeric::RingVector sum = secagg::aggregate_masked(vectors);
    auto [weighted, total] = split_weighted_sum(sum, param_len);
    for (double& v : weighted) v /= total;
    global = global.unflatten_like(weighted);

    if (scaffold) {
      auto control_vectors = gather_masked(
          ep, trainers, static_cast<uint64_t>(2 * round + 1),
          cfg.round_timeout);
      const numeric::RingVector delta_sum =
          secagg::aggregate_masked(control_vectors);
      std::vector<double> deltas = delta_sum.decode();
      if (deltas.size() != param_len) {
        throw ProtocolError("control delta vector has wrong length");
      }
      const ModelState mean_delta = global.unflatten_like(deltas);
      axpy(c_global, 1.0 / static_cast<double>(trainers.size()), mean_delta);
    }
    if (on_round) on_round(round, global);
  }

  RoundMessage done;
  done.round = cfg.train.global_epochs;
  done.done = true;
  done.model = global;
  ep.broadcast(trainers, kStageGlobalModel, done.encode());
  if (scaffold && c_global_out != nullptr) *c_global_out = c_global;
  return global;
}

ModelState run_horizontal_trainer(transport::Endpoint& ep,
                                  const PartyId& assist,
                                  const secagg::MaskPlan& plan,
                                  const data::Table& table,
                                  const HorizontalConfig& cfg,
                                  const TrainerRoundHook& on_round,
                                  ModelState* c_local_out) {
  cfg.model.validate();
  cfg.train.validate();
  const bool scaffold = cfg.train.aggregator == Aggregator::kScaffold;
  ModelState c_local;  // lazily shaped from the first broadcast

  while (true) {
    const Bytes payload =
        ep.recv(kStageGlobalModel, assist, cfg.round_timeout);
    const RoundMessage msg = RoundMessage::decode(payload);
    if (msg.done) {
      if (scaffold && c_local_out != nullptr) *c_local_out = c_local;
      return msg.model;
    }

    TrainConfig round_cfg = cfg.train;
    round_cfg.seed = mix64(cfg.train.seed, hash_str(ep.self().name),
                           static_cast<uint64_t>(msg.round));

    ScaffoldState controls;
    if (scaffold) {
      if (!msg.c_global) {
        throw ProtocolError("scaffold round without server controls");
      }
      if (c_local.entries.empty()) c_local = zeros_like(msg.model);
      controls.c_global = *msg.c_global;
      controls.c_local = c_local;
    }

    const LocalTrainResult local =
        local_train(cfg.model, msg.model, table, round_cfg,
                    scaffold ? &controls : nullptr);

    const numeric::RingVector update =
        weighted_update_vector(local.state, local.sample_count, cfg.fp);
    const secagg::MaskedVector masked = secagg::mask_update(
        update, plan, static_cast<uint64_t>(2 * msg.round));
    ep.send(assist, secagg::kStageMaskedUpdate, masked.serialize());

    if (scaffold) {
      auto [c_next, delta] = scaffold_update_controls(
          c_local, *msg.c_global, msg.model, local.state, local.steps,
          cfg.train.learning_rate);
      // Snap the delta to the fixed-point grid, and apply exactly what the
      // wire carries, so mean(c_local) tracks c_global without drift.
      const ModelState delta_q = quantize_state(delta, cfg.fp);
      axpy(c_local, 1.0, delta_q);
      const numeric::RingVector delta_ring =
          numeric::RingVector::encode(delta_q.flatten(), cfg.fp);
      const secagg::MaskedVector masked_delta = secagg::mask_update(
          delta_ring, plan, static_cast<uint64_t>(2 * msg.round + 1));
      ep.send(assist, secagg::kStageMaskedUpdate, masked_delta.serialize());
    }

    if (on_round) on_round(msg.round, msg.model, local);
  }
}

}  // namespace xfl::horizontal
