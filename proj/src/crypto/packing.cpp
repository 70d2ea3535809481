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

#include "xfl/crypto/packing.hpp"

#include <cmath>

#include "xfl/common/error.hpp"
#include "xfl/crypto/paillier.hpp"

namespace xfl::crypto {

void PackParams::validate() const {
  if (slot_bits < 32 || slot_bits > 256)
    throw CryptoError("packing slot size out of range");
  if (count_headroom_bits == 0 || count_headroom_bits >= slot_bits)
    throw CryptoError("packing count headroom out of range");
  if (scale_bits + count_headroom_bits + 1 >= slot_bits)
    throw CryptoError("packing slot leaves no value range");
}

double PackParams::value_limit() const {
  return std::ldexp(1.0, static_cast<int>(slot_bits - 1 - count_headroom_bits -
                                          scale_bits));
}

namespace {

BigInt slot_bias(const PackParams& params) {
  return BigInt(1) << (params.slot_bits - 1 - params.count_headroom_bits);
}

BigInt biased_slot(double x, const PackParams& params, const BigInt& bias) {
  BigInt scaled = fp_to_int(x, static_cast<int32_t>(params.scale_bits));
  BigInt magnitude = scaled.sign() < 0 ? -scaled : scaled;
  if (magnitude >= bias) throw CryptoError("packed value exceeds slot range");
  return scaled + bias;
}

}  // namespace

BigInt pack_pair(double g, double h, const PackParams& params) {
  params.validate();
  BigInt bias = slot_bias(params);
  return (biased_slot(g, params, bias) << params.slot_bits) +
         biased_slot(h, params, bias);
}

GhPair unpack_pair_sum(const BigInt& v, uint64_t count,
                       const PackParams& params) {
  params.validate();
  if (v.sign() < 0) throw CryptoError("packed sum must be non-negative");
  if (count >> params.count_headroom_bits)
    throw CryptoError("packed count exceeds headroom");
  BigInt total_bias = slot_bias(params) * BigInt(count);
  BigInt top = v >> params.slot_bits;
  BigInt bottom = v - (top << params.slot_bits);
  if (top.bit_length() > params.slot_bits + params.count_headroom_bits)
    throw CryptoError("packed sum out of range");
  int32_t scale = static_cast<int32_t>(params.scale_bits);
  return GhPair{int_to_fp(top - total_bias, scale),
                int_to_fp(bottom - total_bias, scale)};
}

}  // namespace xfl::crypto
