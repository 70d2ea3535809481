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
#include <span>

#include "xfl/common/bytes.hpp"

namespace xfl::crypto {

using Digest = std::array<uint8_t, 32>;

Digest sha256(std::span<const uint8_t> data);
Digest hmac_sha256(std::span<const uint8_t> key, std::span<const uint8_t> data);

// HKDF-SHA256 with zero salt: the session key derivation binding pairwise
// mask seeds to (shared secret, session/pair context). Context must be
// non-empty; distinct contexts give independent 32-byte seeds.
Digest kdf(std::span<const uint8_t> shared, std::span<const uint8_t> context);

}  // namespace xfl::crypto
