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

#include "xfl/numeric/fixed_point.hpp"

#include <cmath>
#include <stdexcept>

#include "xfl/common/error.hpp"

namespace xfl::numeric {

namespace {

uint64_t mask_for(int ring_bits) {
  return ring_bits == 64 ? ~uint64_t{0} : ((uint64_t{1} << ring_bits) - 1);
}

}  // namespace

void validate(const FixedPointParams& params) {
  if (params.ring_bits <= 0 || params.ring_bits > 64 ||
      params.ring_bits % 8 != 0) {
    throw Error("ring_bits must be a positive multiple of 8, at most 64");
  }
  if (params.scale_bits < 0 || params.scale_bits >= params.ring_bits) {
    throw Error("scale_bits must lie in [0, ring_bits)");
  }
}

double fp_headroom(const FixedPointParams& params) {
  return std::ldexp(1.0, params.ring_bits - params.scale_bits - 1);
}

uint64_t fp_encode(double x, const FixedPointParams& params) {
  validate(params);
  if (!std::isfinite(x) || std::fabs(x) >= fp_headroom(params)) {
    throw Error("fixed-point overflow: |x| >= 2^(ring_bits-scale_bits-1)");
  }
  // |x * 2^scale| < 2^63 under the headroom precondition, so llround is
  // exact here and rounds half away from zero.
  int64_t v = std::llround(std::ldexp(x, params.scale_bits));
  return static_cast<uint64_t>(v) & mask_for(params.ring_bits);
}

double fp_decode(uint64_t e, const FixedPointParams& params) {
  validate(params);
  e &= mask_for(params.ring_bits);
  int64_t signed_value;
  if (params.ring_bits == 64) {
    signed_value = static_cast<int64_t>(e);
  } else {
    uint64_t sign_bit = uint64_t{1} << (params.ring_bits - 1);
    signed_value = (e & sign_bit)
                       ? static_cast<int64_t>(e) -
                             static_cast<int64_t>(uint64_t{1} << params.ring_bits)
                       : static_cast<int64_t>(e);
  }
  return std::ldexp(static_cast<double>(signed_value), -params.scale_bits);
}

RingVector::RingVector(std::vector<uint64_t> elements, FixedPointParams params)
    : elems_(std::move(elements)), params_(params), mask_(mask_for(params.ring_bits)) {
  validate(params_);
  for (auto& e : elems_) e &= mask_;
}

RingVector RingVector::zeros(size_t n, FixedPointParams params) {
  return RingVector(std::vector<uint64_t>(n, 0), params);
}

RingVector RingVector::encode(std::span<const double> xs, FixedPointParams params) {
  std::vector<uint64_t> elems;
  elems.reserve(xs.size());
  for (double x : xs) elems.push_back(fp_encode(x, params));
  return RingVector(std::move(elems), params);
}

std::vector<double> RingVector::decode() const {
  std::vector<double> out;
  out.reserve(elems_.size());
  for (uint64_t e : elems_) out.push_back(fp_decode(e, params_));
  return out;
}

RingVector& RingVector::add_in_place(const RingVector& other) {
  if (other.size() != size() || !(other.params_ == params_)) {
    throw Error("ring vector length/params mismatch");
  }
  for (size_t i = 0; i < elems_.size(); ++i) {
    elems_[i] = (elems_[i] + other.elems_[i]) & mask_;
  }
  return *this;
}

RingVector& RingVector::sub_in_place(const RingVector& other) {
  if (other.size() != size() || !(other.params_ == params_)) {
    throw Error("ring vector length/params mismatch");
  }
  for (size_t i = 0; i < elems_.size(); ++i) {
    elems_[i] = (elems_[i] - other.elems_[i]) & mask_;
  }
  return *this;
}

RingVector ring_add(const RingVector& a, const RingVector& b) {
  RingVector out = a;
  out.add_in_place(b);
  return out;
}

RingVector ring_sub(const RingVector& a, const RingVector& b) {
  RingVector out = a;
  out.sub_in_place(b);
  return out;
}

Bytes RingVector::serialize() const {
  BinaryWriter w;
  w.u8(static_cast<uint8_t>(params_.ring_bits));
  w.u8(static_cast<uint8_t>(params_.scale_bits));
  w.u32(static_cast<uint32_t>(elems_.size()));
  int bytes_per = params_.ring_bits / 8;
  for (uint64_t e : elems_) {
    for (int shift = (bytes_per - 1) * 8; shift >= 0; shift -= 8) {
      w.u8(static_cast<uint8_t>(e >> shift));
    }
  }
  return w.take();
}

RingVector RingVector::deserialize(BinaryReader& reader) {
  FixedPointParams params;
  params.ring_bits = reader.u8();
  params.scale_bits = reader.u8();
  validate(params);
  uint32_t n = reader.u32();
  int bytes_per = params.ring_bits / 8;
  std::vector<uint64_t> elems(n);
  for (uint32_t i = 0; i < n; ++i) {
    uint64_t e = 0;
    for (int b = 0; b < bytes_per; ++b) e = (e << 8) | reader.u8();
    elems[i] = e;
  }
  return RingVector(std::move(elems), params);
}

}  // namespace xfl::numeric
