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

#include <array>
#include <cstdint>
#include <span>

#include "xfl/common/bytes.hpp"

namespace xfl::crypto {

// HMAC-SHA256 deterministic random bit generator. The output stream is a
// pure function of (seed material, request sequence); two instances given
// the same inputs produce identical bytes, which is what the one-time-pad
// mask expansion relies on.
//
// Single-owner mutable: concurrent generate() on one instance is forbidden
// by contract.
class HmacDrbg {
 public:
  static constexpr size_t kMaxBytesPerRequest = size_t{1} << 16;
  static constexpr uint64_t kReseedInterval = uint64_t{1} << 48;

  explicit HmacDrbg(std::span<const uint8_t> entropy,
                    std::span<const uint8_t> personalization = {});

  // Appends n bytes of output; throws CryptoError if n exceeds the
  // per-request limit or the generate counter passed the reseed bound.
  Bytes generate(size_t n);
  void generate(std::span<uint8_t> out);

  void reseed(std::span<const uint8_t> entropy);

  uint64_t reseed_counter() const { return reseed_counter_; }

 private:
  void update(std::span<const uint8_t> data);

  std::array<uint8_t, 32> key_;
  std::array<uint8_t, 32> value_;
  uint64_t reseed_counter_ = 1;
};

}  // namespace xfl::crypto
