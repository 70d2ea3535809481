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

#include "xfl/common/bytes.hpp"
#include "xfl/crypto/bigint.hpp"
#include "xfl/crypto/rng.hpp"

namespace xfl::crypto {

// Finite-field Diffie-Hellman over the RFC 7919 ffdhe2048 group. Shared
// secrets are the fixed-width 256-byte big-endian encoding of g^(ab) mod p,
// fed through the HKDF wrapper (hashing.hpp) to derive symmetric seeds.

struct DhParams {
  BigInt p;
  BigInt g;

  // The ffdhe2048 group: p = 2^2048 - 2^1984 + (floor(2^1918 * e) +
  // 560316) * 2^64 - 1, generator 2.
  static const DhParams& ffdhe2048();
};

struct DhKeypair {
  BigInt priv;  // 256-bit exponent
  BigInt pub;   // g^priv mod p
};

DhKeypair dh_keygen(const DhParams& params, RandomSource& rng);

// Fixed-width 256-byte big-endian secret. Rejects degenerate peer values
// (0, 1, p-1 and anything outside (1, p-1)) that would collapse the secret.
Bytes dh_shared(const DhParams& params, const BigInt& own_priv,
                const BigInt& peer_pub);

}  // namespace xfl::crypto
