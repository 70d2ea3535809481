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

#include "xfl/crypto/rng.hpp"

#include <openssl/rand.h>

#include <algorithm>

#include "xfl/common/error.hpp"
#include "xfl/crypto/drbg.hpp"

namespace xfl::crypto {

uint64_t RandomSource::next_u64() {
  std::array<uint8_t, 8> buf;
  fill(buf);
  uint64_t v = 0;
  for (auto b : buf) v = (v << 8) | b;
  return v;
}

uint64_t RandomSource::below(uint64_t bound) {
  if (bound == 0) throw CryptoError("below(0)");
  // Rejection sampling over the largest multiple of bound.
  uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound);
  for (;;) {
    uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

void OsRandom::fill(std::span<uint8_t> out) {
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw CryptoError("OS entropy source failed");
  }
}

namespace {

class DrbgRandom final : public RandomSource {
 public:
  explicit DrbgRandom(std::span<const uint8_t> seed) : drbg_(seed) {}

  void fill(std::span<uint8_t> out) override {
    size_t pos = 0;
    while (pos < out.size()) {
      size_t take = std::min(out.size() - pos, HmacDrbg::kMaxBytesPerRequest);
      drbg_.generate(out.subspan(pos, take));
      pos += take;
    }
  }

 private:
  HmacDrbg drbg_;
};

}  // namespace

std::unique_ptr<RandomSource> seeded_random(std::span<const uint8_t> seed) {
  return std::make_unique<DrbgRandom>(seed);
}

std::unique_ptr<RandomSource> seeded_random(uint64_t seed) {
  std::array<uint8_t, 8> buf;
  for (int i = 7; i >= 0; --i) {
    buf[i] = static_cast<uint8_t>(seed & 0xff);
    seed >>= 8;
  }
  return seeded_random(std::span<const uint8_t>(buf));
}

}  // namespace xfl::crypto
