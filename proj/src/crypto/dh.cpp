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

#include "xfl/crypto/dh.hpp"

#include "xfl/common/error.hpp"

namespace xfl::crypto {

namespace {

constexpr char kFfdhe2048PrimeHex[] =
    "FFFFFFFFFFFFFFFFADF85458A2BB4A9AAFDC5620273D3CF1D8B9C583CE2D3695"
    "A9E13641146433FBCC939DCE249B3EF97D2FE363630C75D8F681B202AEC4617A"
    "D3DF1ED5D5FD65612433F51F5F066ED0856365553DED1AF3B557135E7F57C935"
    "984F0C70E0E68B77E2A689DAF3EFE8721DF158A136ADE73530ACCA4F483A797A"
    "BC0AB182B324FB61D108A94BB2C8E3FBB96ADAB760D7F4681D4F42A3DE394DF4"
    "AE56EDE76372BB190B07A7C8EE0A6D709E02FCE1CDF7E2ECC03404CD28342F61"
    "9172FE9CE98583FF8E4F1232EEF28183C3FE3B1B4C6FAD733BB5FCBC2EC22005"
    "C58EF1837D1683B2C6F34A26C1B2EFFA886B423861285C97FFFFFFFFFFFFFFFF";

constexpr size_t kSharedSecretBytes = 256;
constexpr size_t kPrivateBits = 256;

}  // namespace

const DhParams& DhParams::ffdhe2048() {
  static const DhParams params{BigInt::from_hex(kFfdhe2048PrimeHex), BigInt(2)};
  return params;
}

DhKeypair dh_keygen(const DhParams& params, RandomSource& rng) {
  DhKeypair kp;
  // Exactly 256 bits keeps the exponent well above the degenerate range
  // while staying far smaller than the group order.
  kp.priv = BigInt::random_bits_exact(rng, kPrivateBits);
  kp.pub = BigInt::powm(params.g, kp.priv, params.p);
  return kp;
}

Bytes dh_shared(const DhParams& params, const BigInt& own_priv,
                const BigInt& peer_pub) {
  BigInt p_minus_1 = params.p - BigInt(1);
  if (peer_pub <= BigInt(1) || peer_pub >= p_minus_1)
    throw CryptoError("degenerate peer public value");
  BigInt s = BigInt::powm(peer_pub, own_priv, params.p);
  return s.to_bytes_be(kSharedSecretBytes);
}

}  // namespace xfl::crypto
