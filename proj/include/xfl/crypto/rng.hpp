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
#include <memory>
#include <span>

#include "xfl/common/bytes.hpp"

namespace xfl::crypto {

// Byte source behind key generation, encryption randomizers and protocol
// masks. Single-owner mutable: one logical owner draws from an instance.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<uint8_t> out) = 0;

  Bytes bytes(size_t n) {
    Bytes out(n);
    fill(out);
    return out;
  }
  uint64_t next_u64();
  // Uniform in [0, bound), bound > 0, via rejection sampling.
  uint64_t below(uint64_t bound);
};

// Production entropy from the OS (getentropy).
class OsRandom final : public RandomSource {
 public:
  void fill(std::span<uint8_t> out) override;
};

// Deterministic source seeded from a 64-bit value; backed by the HMAC DRBG.
// Exists for reproducible task runs and tests.
std::unique_ptr<RandomSource> seeded_random(uint64_t seed);
std::unique_ptr<RandomSource> seeded_random(std::span<const uint8_t> seed);

}  // namespace xfl::crypto
