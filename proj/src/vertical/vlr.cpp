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

#include "xfl/vertical/vlr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <utility>

#include <json.hpp>

#include "xfl/common/error.hpp"
#include "xfl/common/seed_mix.hpp"
#include "xfl/crypto/paillier.hpp"

namespace xfl::vertical {

namespace {

using nlohmann::json;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Batch schedule of one epoch, derived identically at every party from the
// shared task seed: a seeded shuffle of all rows cut into consecutive
// slices.
std::vector<std::vector<size_t>> epoch_batches(size_t n, size_t batch_size,
                                               uint64_t seed, int epoch) {
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), size_t{0});
  std::mt19937_64 eng(mix64(seed, hash_str("vlr"),
                            static_cast<uint64_t>(epoch)));
  std::shuffle(perm.begin(), perm.end(), eng);
  std::vector<std::vector<size_t>> batches;
  for (size_t start = 0; start < n; start += batch_size) {
    const size_t stop = std::min(n, start + batch_size);
    batches.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(start),
                         perm.begin() + static_cast<std::ptrdiff_t>(stop));
  }
  return batches;
}

Bytes encode_scores(uint32_t epoch, uint32_t batch,
                    const std::vector<double>& u) {
  BinaryWriter w;
  w.u32(epoch);
  w.u32(batch);
  w.u64(u.size());
  for (double v : u) w.f64(v);
  return w.take();
}

std::vector<double> decode_scores(const Bytes& payload, uint32_t epoch,
                                  uint32_t batch, size_t count) {
  BinaryReader r(payload);
  if (r.u32() != epoch || r.u32() != batch || r.u64() != count) {
    throw ProtocolError("vlr: partial scores for the wrong batch");
  }
  std::vector<double> u(count);
  for (size_t i = 0; i < count; ++i) u[i] = r.f64();
  return u;
}

// Dot products of one party's columns against a batch of rows.
std::vector<double> partial_scores(const data::Table& table,
                                   const std::vector<double>& weights,
                                   const std::vector<size_t>& rows) {
  std::vector<double> u(rows.size(), 0.0);
  for (size_t j = 0; j < table.n_cols(); ++j) {
    const std::vector<double>& col = table.columns[j];
    const double wj = weights[j];
    for (size_t k = 0; k < rows.size(); ++k) u[k] += wj * col[rows[k]];
  }
  return u;
}

// Gradient masks live on the 2^-20 grid within [-2^20, 2^20), so their
// fixed-point image at the product scale is exact and unmasking costs only
// one double rounding.
double draw_mask(crypto::RandomSource& rng) {
  const int64_t k = static_cast<int64_t>(rng.below(uint64_t{1} << 41)) -
                    (int64_t{1} << 40);
  return static_cast<double>(k) / static_cast<double>(int64_t{1} << 20);
}

}  // namespace

void VlrParams::validate() const {
  if (epochs < 1) throw ValidationError("vlr: epochs must be >= 1");
  if (batch_size < 1) throw ValidationError("vlr: batch_size must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("vlr: learning_rate must be positive");
  }
  if (scale_bits < 8 || scale_bits > 60) {
    throw ValidationError("vlr: scale_bits must be in [8, 60]");
  }
  if (stage_timeout.count() <= 0) {
    throw ValidationError("vlr: stage_timeout must be positive");
  }
}

std::string VlrModel::to_json() const {
  return json{{"weights", weights}, {"intercept", intercept}}.dump();
}

VlrModel VlrModel::from_json(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded() || !v.is_object() || !v.contains("weights") ||
      !v.contains("intercept")) {
    throw ValidationError("vlr: malformed model json");
  }
  VlrModel m;
  m.weights = v["weights"].get<std::vector<double>>();
  m.intercept = v["intercept"].get<double>();
  return m;
}

VlrResult run_vlr_label_trainer(transport::Endpoint& ep,
                                const std::vector<transport::PartyId>& trainers,
                                const data::Table& table,
                                const VlrParams& params,
                                crypto::RandomSource& rng,
                                const VlrEpochHook& on_epoch) {
  params.validate();
  table.validate();
  if (!table.labels) {
    throw ValidationError("vlr: the label trainer needs a labeled table");
  }
  if (trainers.empty()) {
    throw ValidationError("vlr: at least one feature trainer is required");
  }
  const std::vector<double>& y = *table.labels;
  const size_t n = table.n_rows();
  if (n == 0) throw ValidationError("vlr: empty table");

  const auto keys = crypto::paillier_keygen(params.key_bits, rng);
  const int32_t scale = params.scale_bits;

  VlrResult out;
  out.model.weights.assign(table.n_cols(), 0.0);
  out.model.intercept = 0.0;
  bool sent_pk = false;

  // z for a batch of rows under the current weights.
  const auto own_scores = [&](const std::vector<size_t>& rows) {
    auto z = partial_scores(table, out.model.weights, rows);
    for (double& v : z) v += out.model.intercept;
    return z;
  };
  const auto add_trainer_scores = [&](std::vector<double>& z, uint32_t epoch,
                                      uint32_t batch) {
    for (auto& [pid, payload] :
         ep.gather(trainers, kStagePartialScore, params.stage_timeout)) {
      const auto u = decode_scores(payload, epoch, batch, z.size());
      for (size_t k = 0; k < z.size(); ++k) z[k] += u[k];
    }
    for (double v : z) {
      if (!std::isfinite(v)) {
        throw Error("vlr: training diverged: non-finite score");
      }
    }
  };

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    const auto batches = epoch_batches(n, params.batch_size, params.seed,
                                       epoch);
    std::vector<double> epoch_probs(n, 0.0);
    for (size_t b = 0; b < batches.size(); ++b) {
      const std::vector<size_t>& rows = batches[b];
      const double m = static_cast<double>(rows.size());

      std::vector<double> z = own_scores(rows);
      add_trainer_scores(z, static_cast<uint32_t>(epoch),
                         static_cast<uint32_t>(b));

      // Residuals, and this party's own plaintext gradient step.
      std::vector<double> d(rows.size());
      for (size_t k = 0; k < rows.size(); ++k) {
        const double p = sigmoid(z[k]);
        epoch_probs[rows[k]] = p;
        d[k] = p - y[rows[k]];
      }
      for (size_t j = 0; j < table.n_cols(); ++j) {
        double grad = 0.0;
        for (size_t k = 0; k < rows.size(); ++k) {
          grad += d[k] * table.columns[j][rows[k]];
        }
        out.model.weights[j] -= params.learning_rate * grad / m;
      }
      double grad_b = 0.0;
      for (double v : d) grad_b += v;
      out.model.intercept -= params.learning_rate * grad_b / m;

      // Encrypted residuals for the feature holders.
      BinaryWriter w;
      w.u8(sent_pk ? 0 : 1);
      if (!sent_pk) {
        w.bytes(keys.pub.serialize());
        sent_pk = true;
      }
      w.u32(static_cast<uint32_t>(epoch));
      w.u32(static_cast<uint32_t>(b));
      w.u64(d.size());
      for (double v : d) {
        const crypto::BigInt m_int = crypto::encode_signed(
            crypto::fp_to_int(v, scale), keys.pub.n);
        w.bytes(crypto::paillier_encrypt_sk(keys.priv, keys.pub, m_int, rng,
                                            scale)
                    .serialize());
      }
      ep.broadcast(trainers, kStageEncResidual, w.take());

      // Unblind nothing: decrypt the masked per-feature sums and return
      // them; the mask only comes off at the feature holder.
      for (auto& [pid, payload] :
           ep.gather(trainers, kStageEncGrad, params.stage_timeout)) {
        BinaryReader r(payload);
        if (r.u32() != static_cast<uint32_t>(epoch) ||
            r.u32() != static_cast<uint32_t>(b)) {
          throw ProtocolError("vlr: encrypted gradient for the wrong batch");
        }
        const uint32_t n_features = r.u32();
        BinaryWriter reply;
        reply.u32(static_cast<uint32_t>(epoch));
        reply.u32(static_cast<uint32_t>(b));
        reply.u32(n_features);
        for (uint32_t j = 0; j < n_features; ++j) {
          const Bytes blob = r.bytes();
          BinaryReader cr(blob);
          const auto ct = crypto::PaillierCiphertext::deserialize(cr);
          if (ct.exponent != 2 * scale) {
            throw ProtocolError("vlr: masked gradient at unexpected scale");
          }
          const crypto::BigInt v = crypto::decode_signed(
              crypto::paillier_decrypt(keys.priv, ct), keys.pub.n);
          reply.f64(crypto::int_to_fp(v, ct.exponent));
        }
        ep.send(pid, kStageMaskedGrad, reply.take());
      }
    }
    if (on_epoch) on_epoch(epoch, data::evaluate_binary(epoch_probs, y));
  }

  // Final full-table pass under the converged weights.
  std::vector<size_t> all(n);
  std::iota(all.begin(), all.end(), size_t{0});
  std::vector<double> z = own_scores(all);
  add_trainer_scores(z, static_cast<uint32_t>(params.epochs), 0);
  out.train_scores.resize(n);
  for (size_t i = 0; i < n; ++i) out.train_scores[i] = sigmoid(z[i]);
  return out;
}

VlrResult run_vlr_trainer(transport::Endpoint& ep,
                          const transport::PartyId& label_trainer,
                          const data::Table& table, const VlrParams& params,
                          crypto::RandomSource& rng) {
  params.validate();
  table.validate();
  const size_t n = table.n_rows();
  if (n == 0) throw ValidationError("vlr: empty table");
  const size_t n_features = table.n_cols();
  const int32_t scale = params.scale_bits;

  VlrResult out;
  out.model.weights.assign(n_features, 0.0);
  std::optional<crypto::PaillierPublicKey> pk;

  // Fixed-point feature images, computed once.
  std::vector<std::vector<crypto::BigInt>> x_int(n_features);
  for (size_t j = 0; j < n_features; ++j) {
    x_int[j].reserve(n);
    for (size_t i = 0; i < n; ++i) {
      x_int[j].push_back(crypto::fp_to_int(table.columns[j][i], scale));
    }
  }

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    const auto batches = epoch_batches(n, params.batch_size, params.seed,
                                       epoch);
    for (size_t b = 0; b < batches.size(); ++b) {
      const std::vector<size_t>& rows = batches[b];
      const double m = static_cast<double>(rows.size());

      ep.send(label_trainer, kStagePartialScore,
              encode_scores(static_cast<uint32_t>(epoch),
                            static_cast<uint32_t>(b),
                            partial_scores(table, out.model.weights, rows)));

      const Bytes res_bytes =
          ep.recv(kStageEncResidual, label_trainer, params.stage_timeout);
      BinaryReader r(res_bytes);
      if (r.u8() != 0) {
        const Bytes pk_bytes = r.bytes();
        BinaryReader pr(pk_bytes);
        pk = crypto::PaillierPublicKey::deserialize(pr);
      }
      if (!pk) {
        throw ProtocolError("vlr: residuals arrived before the public key");
      }
      if (r.u32() != static_cast<uint32_t>(epoch) ||
          r.u32() != static_cast<uint32_t>(b) || r.u64() != rows.size()) {
        throw ProtocolError("vlr: residuals for the wrong batch");
      }
      std::vector<crypto::PaillierCiphertext> enc_d;
      enc_d.reserve(rows.size());
      for (size_t k = 0; k < rows.size(); ++k) {
        const Bytes blob = r.bytes();
        BinaryReader cr(blob);
        enc_d.push_back(crypto::PaillierCiphertext::deserialize(cr));
      }

      // Per feature: homomorphic dot product with the batch column, plus an
      // additive mask the label holder cannot remove.
      std::vector<double> masks(n_features);
      BinaryWriter w;
      w.u32(static_cast<uint32_t>(epoch));
      w.u32(static_cast<uint32_t>(b));
      w.u32(static_cast<uint32_t>(n_features));
      for (size_t j = 0; j < n_features; ++j) {
        std::optional<crypto::PaillierCiphertext> acc;
        for (size_t k = 0; k < rows.size(); ++k) {
          auto term =
              crypto::ct_mul_signed(*pk, enc_d[k], x_int[j][rows[k]], scale);
          acc = acc ? crypto::ct_add(*pk, *acc, term) : term;
        }
        masks[j] = draw_mask(rng);
        const crypto::BigInt mask_int = crypto::encode_signed(
            crypto::fp_to_int(masks[j], 2 * scale), pk->n);
        const auto masked = crypto::ct_add(
            *pk, *acc,
            crypto::paillier_encrypt_pk(*pk, mask_int, rng, 2 * scale));
        w.bytes(masked.serialize());
      }
      ep.send(label_trainer, kStageEncGrad, w.take());

      const Bytes reply =
          ep.recv(kStageMaskedGrad, label_trainer, params.stage_timeout);
      BinaryReader rr(reply);
      if (rr.u32() != static_cast<uint32_t>(epoch) ||
          rr.u32() != static_cast<uint32_t>(b) ||
          rr.u32() != static_cast<uint32_t>(n_features)) {
        throw ProtocolError("vlr: masked gradients for the wrong batch");
      }
      for (size_t j = 0; j < n_features; ++j) {
        const double grad = (rr.f64() - masks[j]) / m;
        out.model.weights[j] -= params.learning_rate * grad;
      }
    }
  }

  // Final full-table pass for the label holder's training scores.
  std::vector<size_t> all(n);
  std::iota(all.begin(), all.end(), size_t{0});
  ep.send(label_trainer, kStagePartialScore,
          encode_scores(static_cast<uint32_t>(params.epochs), 0,
                        partial_scores(table, out.model.weights, all)));
  return out;
}

}  // namespace xfl::vertical
