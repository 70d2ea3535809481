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
#include <span>
#include <vector>

#include "xfl/common/bytes.hpp"

namespace xfl::numeric {

// Fixed-point layout for embedding reals into the ring Z_{2^ring_bits}.
// Signed values use the two's-complement embedding, so all masking and
// aggregation arithmetic stays purely modular. Rounding is
// half-away-from-zero, which keeps encode(-x) == -encode(x).
struct FixedPointParams {
  int scale_bits = 24;  // fractional bits
  int ring_bits = 64;   // ring modulus is 2^ring_bits; multiple of 8, <= 64

  bool operator==(const FixedPointParams&) const = default;
};

void validate(const FixedPointParams& params);

// Largest magnitude encodable without wrapping into the sign half:
// 2^(ring_bits - scale_bits - 1).
double fp_headroom(const FixedPointParams& params);

// round(x * 2^scale_bits) mod 2^ring_bits. Throws Error on |x| >= headroom
// or non-finite x.
uint64_t fp_encode(double x, const FixedPointParams& params);

// Two's-complement interpretation of e, divided by 2^scale_bits.
double fp_decode(uint64_t e, const FixedPointParams& params);

// A fixed-length vector of ring elements; the unit of secure aggregation.
class RingVector {
 public:
  RingVector(std::vector<uint64_t> elements, FixedPointParams params);

  static RingVector zeros(size_t n, FixedPointParams params);
  static RingVector encode(std::span<const double> xs, FixedPointParams params);

  std::vector<double> decode() const;

  size_t size() const { return elems_.size(); }
  const std::vector<uint64_t>& elements() const { return elems_; }
  const FixedPointParams& params() const { return params_; }
  uint64_t modulus_mask() const { return mask_; }

  // Elementwise modular ops; throw Error on length/params mismatch.
  RingVector& add_in_place(const RingVector& other);
  RingVector& sub_in_place(const RingVector& other);

  bool operator==(const RingVector& other) const = default;

  Bytes serialize() const;
  static RingVector deserialize(BinaryReader& reader);

 private:
  std::vector<uint64_t> elems_;
  FixedPointParams params_;
  uint64_t mask_;
};

RingVector ring_add(const RingVector& a, const RingVector& b);
RingVector ring_sub(const RingVector& a, const RingVector& b);

}  // namespace xfl::numeric
