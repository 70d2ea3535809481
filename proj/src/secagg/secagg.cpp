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

#include "xfl/secagg/secagg.hpp"

#include <algorithm>
#include <set>

#include "xfl/common/error.hpp"
#include "xfl/crypto/dh.hpp"
#include "xfl/crypto/drbg.hpp"

namespace xfl::secagg {

namespace {

constexpr size_t kDhPublicBytes = 256;

std::string pair_context(const std::string& session_id, int a, int b) {
  int lo = std::min(a, b), hi = std::max(a, b);
  return session_id + "|" + std::to_string(lo) + "|" + std::to_string(hi);
}

// The pad for one (pair, round): a DRBG keyed by the pair seed and
// personalized with the round context, expanded to n ring elements.
std::vector<uint64_t> expand_pad(const crypto::Digest& seed,
                                 const std::string& session_id, uint64_t round,
                                 size_t n) {
  std::string context = session_id + "|round|" + std::to_string(round);
  crypto::HmacDrbg drbg(seed, to_bytes(context));
  std::vector<uint64_t> pad(n);
  Bytes buf;
  size_t produced = 0;
  while (produced < n) {
    size_t batch = std::min(n - produced,
                            crypto::HmacDrbg::kMaxBytesPerRequest / 8);
    buf.resize(batch * 8);
    drbg.generate(buf);
    for (size_t i = 0; i < batch; ++i) {
      uint64_t v = 0;
      for (int b = 0; b < 8; ++b) v = (v << 8) | buf[i * 8 + b];
      pad[produced + i] = v;
    }
    produced += batch;
  }
  return pad;
}

}  // namespace

Bytes MaskedVector::serialize() const {
  BinaryWriter w;
  w.u64(round);
  w.u32(static_cast<uint32_t>(sender.ordinal));
  w.str(sender.name);
  Bytes data_wire = data.serialize();
  w.bytes(data_wire);
  return std::move(w).take();
}

MaskedVector MaskedVector::deserialize(BinaryReader& reader) {
  uint64_t round = reader.u64();
  int ordinal = static_cast<int>(reader.u32());
  std::string name = reader.str();
  Bytes data_wire = reader.bytes();
  BinaryReader data_reader(data_wire);
  numeric::RingVector data = numeric::RingVector::deserialize(data_reader);
  if (!data_reader.done())
    throw Error("masked vector payload has trailing bytes");
  return MaskedVector{std::move(data), PartyId{ordinal, std::move(name)},
                      round};
}

MaskPlan negotiate_masks(transport::Endpoint& channel,
                         const std::vector<PartyId>& parties,
                         const std::string& session_id,
                         crypto::RandomSource& rng) {
  const PartyId& self = channel.self();
  const crypto::DhParams& group = crypto::DhParams::ffdhe2048();
  crypto::DhKeypair keypair = crypto::dh_keygen(group, rng);
  Bytes own_pub = keypair.pub.to_bytes_be(kDhPublicBytes);

  MaskPlan plan;
  plan.self = self;
  plan.session_id = session_id;

  for (const PartyId& peer : parties) {
    if (peer.ordinal == self.ordinal) continue;
    channel.send(peer, kStageDhPub, own_pub);
  }
  for (const PartyId& peer : parties) {
    if (peer.ordinal == self.ordinal) continue;
    Bytes peer_pub_bytes = channel.recv(kStageDhPub, peer);
    crypto::BigInt peer_pub = crypto::BigInt::from_bytes_be(peer_pub_bytes);
    Bytes shared = crypto::dh_shared(group, keypair.priv, peer_pub);
    std::string context =
        pair_context(session_id, self.ordinal, peer.ordinal);
    plan.peer_seeds[peer.ordinal] = crypto::kdf(shared, to_bytes(context));
  }
  return plan;
}

MaskedVector mask_update(const numeric::RingVector& update,
                         const MaskPlan& plan, uint64_t round) {
  const uint64_t mask = update.modulus_mask();
  std::vector<uint64_t> out = update.elements();
  for (const auto& [peer_ordinal, seed] : plan.peer_seeds) {
    std::vector<uint64_t> pad =
        expand_pad(seed, plan.session_id, round, out.size());
    if (peer_ordinal > plan.self.ordinal) {
      for (size_t i = 0; i < out.size(); ++i)
        out[i] = (out[i] + pad[i]) & mask;
    } else {
      for (size_t i = 0; i < out.size(); ++i)
        out[i] = (out[i] - pad[i]) & mask;
    }
  }
  return MaskedVector{numeric::RingVector(std::move(out), update.params()),
                      plan.self, round};
}

numeric::RingVector aggregate_masked(
    const std::vector<MaskedVector>& vectors) {
  if (vectors.empty()) throw Error("aggregate of zero masked vectors");
  std::set<int> senders;
  for (const MaskedVector& v : vectors) {
    if (v.round != vectors.front().round)
      throw Error("masked vectors from different rounds");
    if (!senders.insert(v.sender.ordinal).second)
      throw Error("duplicate masked vector from " + v.sender.name);
  }
  numeric::RingVector sum = vectors.front().data;
  for (size_t i = 1; i < vectors.size(); ++i)
    sum.add_in_place(vectors[i].data);
  return sum;
}

}  // namespace xfl::secagg
