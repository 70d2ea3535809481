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

#include "xfl/crypto/hashing.hpp"

#include <openssl/hmac.h>
#include <openssl/sha.h>

#include "xfl/common/error.hpp"

namespace xfl::crypto {

Digest sha256(std::span<const uint8_t> data) {
  Digest out;
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Digest hmac_sha256(std::span<const uint8_t> key, std::span<const uint8_t> data) {
  Digest out;
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(),
           data.size(), out.data(), &len) == nullptr ||
      len != out.size()) {
    throw CryptoError("HMAC-SHA256 failed");
  }
  return out;
}

Digest kdf(std::span<const uint8_t> shared, std::span<const uint8_t> context) {
  if (context.empty()) {
    throw CryptoError("kdf requires a non-empty context");
  }
  // HKDF-SHA256, zero salt, single-block expand (output is one hash wide).
  Digest zero_salt{};
  Digest prk = hmac_sha256(zero_salt, shared);
  Bytes info(context.begin(), context.end());
  info.push_back(0x01);
  return hmac_sha256(prk, info);
}

}  // namespace xfl::crypto
