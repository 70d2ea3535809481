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

#include "xfl/crypto/drbg.hpp"

#include <algorithm>
#include <cstring>

#include "xfl/common/error.hpp"
#include "xfl/crypto/hashing.hpp"

namespace xfl::crypto {

HmacDrbg::HmacDrbg(std::span<const uint8_t> entropy,
                   std::span<const uint8_t> personalization) {
  key_.fill(0x00);
  value_.fill(0x01);
  Bytes seed_material(entropy.begin(), entropy.end());
  seed_material.insert(seed_material.end(), personalization.begin(),
                       personalization.end());
  update(seed_material);
}

void HmacDrbg::update(std::span<const uint8_t> data) {
  Bytes msg(value_.begin(), value_.end());
  msg.push_back(0x00);
  msg.insert(msg.end(), data.begin(), data.end());
  key_ = hmac_sha256(key_, msg);
  value_ = hmac_sha256(key_, value_);
  if (!data.empty()) {
    msg.assign(value_.begin(), value_.end());
    msg.push_back(0x01);
    msg.insert(msg.end(), data.begin(), data.end());
    key_ = hmac_sha256(key_, msg);
    value_ = hmac_sha256(key_, value_);
  }
}

void HmacDrbg::reseed(std::span<const uint8_t> entropy) {
  update(entropy);
  reseed_counter_ = 1;
}

void HmacDrbg::generate(std::span<uint8_t> out) {
  if (out.size() > kMaxBytesPerRequest) {
    throw CryptoError("drbg request exceeds per-request byte limit");
  }
  if (reseed_counter_ > kReseedInterval) {
    throw CryptoError("drbg reseed required: generate counter exhausted");
  }
  size_t produced = 0;
  while (produced < out.size()) {
    value_ = hmac_sha256(key_, value_);
    size_t take = std::min(value_.size(), out.size() - produced);
    std::memcpy(out.data() + produced, value_.data(), take);
    produced += take;
  }
  update({});
  ++reseed_counter_;
}

Bytes HmacDrbg::generate(size_t n) {
  Bytes out(n);
  generate(std::span<uint8_t>(out));
  return out;
}

}  // namespace xfl::crypto
