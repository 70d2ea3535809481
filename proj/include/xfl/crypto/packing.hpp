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

#include "xfl/crypto/bigint.hpp"

namespace xfl::crypto {

// Packs a (gradient, hessian) pair into one plaintext so a single ciphertext
// addition accumulates both statistics, halving homomorphic work.
//
// Each value is fixed-point encoded at scale_bits and shifted by the bias
// B = 2^(slot_bits - 1 - count_headroom_bits), making every slot value
// positive: slot = round(x * 2^scale_bits) + B. The pair occupies two
// adjacent slots, v = slot(g) * 2^slot_bits + slot(h). Because k biased
// slots sum to under k * 2B <= 2^slot_bits for k <= 2^count_headroom_bits,
// sums of packed values never borrow or carry across the slot boundary;
// unpacking subtracts count * B from each slot.

struct PackParams {
  uint32_t slot_bits = 96;
  uint32_t count_headroom_bits = 21;
  uint32_t scale_bits = 40;

  void validate() const;
  // Largest representable |x|: 2^(slot_bits - 1 - headroom - scale).
  double value_limit() const;
  // Plaintext bits one packed value occupies (2 * slot_bits); sums need
  // count_headroom_bits more. Callers check this against the key modulus.
  uint32_t packed_bits() const { return 2 * slot_bits; }
};

struct GhPair {
  double g = 0.0;
  double h = 0.0;
};

BigInt pack_pair(double g, double h, const PackParams& params);

// Inverts the packing on a sum of `count` packed values.
GhPair unpack_pair_sum(const BigInt& v, uint64_t count,
                       const PackParams& params);

}  // namespace xfl::crypto
