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

#include <map>
#include <string>
#include <vector>

#include "xfl/crypto/hashing.hpp"
#include "xfl/crypto/rng.hpp"
#include "xfl/numeric/fixed_point.hpp"
#include "xfl/transport/endpoint.hpp"
#include "xfl/transport/party.hpp"

namespace xfl::secagg {

using transport::PartyId;

// Pairwise one-time-pad masking: each unordered pair of trainers shares a
// DH-agreed 32-byte seed; every round each pair expands a fresh pad and the
// two sides apply it with opposite signs, so any full sum cancels the pads
// exactly (bitwise) while individual vectors look uniform. The aggregator
// holds no seeds. No dropout recovery: a missing party aborts the round.

inline constexpr char kStageDhPub[] = "secagg/dh_pub";
inline constexpr char kStageMaskedUpdate[] = "secagg/masked_update";

struct MaskPlan {
  PartyId self;
  std::string session_id;
  // Peer ordinal -> pair seed; both sides of a pair hold the same seed.
  std::map<int, crypto::Digest> peer_seeds;
};

struct MaskedVector {
  numeric::RingVector data;
  PartyId sender;
  uint64_t round = 0;

  Bytes serialize() const;
  static MaskedVector deserialize(BinaryReader& reader);
};

// One blocking DH exchange per unordered pair over the channel. `parties`
// is every masking participant including self, in roster order; the pair
// seed is kdf(shared_secret, session_id | min_ordinal | max_ordinal).
MaskPlan negotiate_masks(transport::Endpoint& channel,
                         const std::vector<PartyId>& parties,
                         const std::string& session_id,
                         crypto::RandomSource& rng);

// update + sum_{j > self} pad_ij - sum_{j < self} pad_ij (mod ring), where
// pad_ij is the round's DRBG stream expanded from the pair seed and the
// round context. Pure given its inputs.
MaskedVector mask_update(const numeric::RingVector& update,
                         const MaskPlan& plan, uint64_t round);

// Elementwise ring sum; with one vector per participating party the pads
// cancel and the result is the exact ring sum of the plain updates. Rejects
// empty input, round mismatches, duplicate senders, and shape mismatches.
numeric::RingVector aggregate_masked(const std::vector<MaskedVector>& vectors);

}  // namespace xfl::secagg
