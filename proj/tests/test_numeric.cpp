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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "xfl/common/error.hpp"
#include "xfl/numeric/fixed_point.hpp"

using namespace xfl;
using namespace xfl::numeric;

TEST_CASE("fixed point rounds half away from zero") {
  FixedPointParams fp{};  // scale 24, ring 64
  // round(0.1 * 2^24) = 1677722, checked against an independent evaluation.
  CHECK(fp_encode(0.1, fp) == 1677722u);
  CHECK(fp_encode(1.0, fp) == (uint64_t{1} << 24));
  CHECK(fp_encode(0.0, fp) == 0u);
  // Negative values take the two's-complement embedding.
  CHECK(fp_encode(-0.1, fp) == static_cast<uint64_t>(-int64_t{1677722}));
  CHECK(fp_encode(-1.0, fp) == static_cast<uint64_t>(-(int64_t{1} << 24)));
}

TEST_CASE("fixed point decode inverts encode within quantization error") {
  FixedPointParams fp{};
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-1e5, 1e5);
  const double ulp = std::ldexp(1.0, -fp.scale_bits);
  for (int i = 0; i < 1000; ++i) {
    double x = dist(gen);
    double back = fp_decode(fp_encode(x, fp), fp);
    CHECK(std::fabs(back - x) <= 0.5 * ulp);
  }
  // Exactly representable values roundtrip bit-for-bit.
  CHECK(fp_decode(fp_encode(-3.5, fp), fp) == -3.5);
}

TEST_CASE("fixed point encode symmetry: encode(-x) == -encode(x)") {
  FixedPointParams fp{};
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> dist(0.0, 1e6);
  for (int i = 0; i < 500; ++i) {
    double x = dist(gen);
    uint64_t pos = fp_encode(x, fp);
    uint64_t neg = fp_encode(-x, fp);
    CHECK(neg == (~pos + 1));
  }
}

TEST_CASE("fixed point rejects values at or beyond headroom") {
  FixedPointParams fp{};
  double limit = fp_headroom(fp);
  CHECK(limit == std::ldexp(1.0, 64 - 24 - 1));
  CHECK_NOTHROW(fp_encode(std::nextafter(limit, 0.0), fp));
  CHECK_THROWS_AS(fp_encode(limit, fp), Error);
  CHECK_THROWS_AS(fp_encode(-limit - 1.0, fp), Error);
  CHECK_THROWS_AS(fp_encode(std::nan(""), fp), Error);
  CHECK_THROWS_AS(fp_encode(INFINITY, fp), Error);
}

TEST_CASE("fixed point params are validated") {
  CHECK_THROWS_AS(validate(FixedPointParams{24, 0}), Error);
  CHECK_THROWS_AS(validate(FixedPointParams{24, 65}), Error);
  CHECK_THROWS_AS(validate(FixedPointParams{24, 63}), Error);  // not *8
  CHECK_THROWS_AS(validate(FixedPointParams{64, 64}), Error);  // no headroom
  CHECK_THROWS_AS(validate(FixedPointParams{-1, 64}), Error);
  CHECK_NOTHROW(validate(FixedPointParams{16, 32}));
}

TEST_CASE("smaller rings wrap modulo 2^ring_bits") {
  FixedPointParams fp{8, 16};
  uint64_t e = fp_encode(-1.0, fp);
  CHECK(e == 0xFF00u);  // two's complement within 16 bits
  CHECK(fp_decode(e, fp) == -1.0);
  uint64_t wrapped = (e + fp_encode(2.0, fp)) & 0xFFFFu;
  CHECK(fp_decode(wrapped, fp) == 1.0);
}

TEST_CASE("ring vectors add and subtract elementwise with exact cancellation") {
  FixedPointParams fp{};
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> dist(-100.0, 100.0);
  std::vector<double> xs(64);
  for (auto& x : xs) x = dist(gen);

  RingVector v = RingVector::encode(xs, fp);
  RingVector mask = RingVector::zeros(64, fp);
  {
    std::vector<uint64_t> m(64);
    for (auto& e : m) e = gen();
    mask = RingVector(std::move(m), fp);
  }

  RingVector masked = ring_add(v, mask);
  RingVector recovered = ring_sub(masked, mask);
  CHECK(recovered == v);  // bitwise, mask cancels exactly

  RingVector sum = ring_add(v, v);
  for (size_t i = 0; i < xs.size(); ++i) {
    double two = fp_decode(fp_encode(xs[i], fp) * 2, fp);
    CHECK(sum.decode()[i] == doctest::Approx(two).epsilon(1e-12));
  }
}

TEST_CASE("ring vector ops reject mismatched shapes and params") {
  FixedPointParams fp{};
  RingVector a = RingVector::zeros(4, fp);
  RingVector b = RingVector::zeros(5, fp);
  CHECK_THROWS_AS(ring_add(a, b), Error);
  RingVector c = RingVector::zeros(4, FixedPointParams{16, 64});
  CHECK_THROWS_AS(ring_add(a, c), Error);
}

TEST_CASE("ring vector serialization roundtrips") {
  FixedPointParams fp{20, 64};
  std::vector<double> xs{0.0, 1.5, -2.25, 1000.0, -0.375};
  RingVector v = RingVector::encode(xs, fp);
  Bytes wire = v.serialize();
  BinaryReader reader(wire);
  RingVector back = RingVector::deserialize(reader);
  CHECK(reader.done());
  CHECK(back == v);
  CHECK(back.params() == fp);

  // Truncated payloads are rejected.
  Bytes cut(wire.begin(), wire.end() - 3);
  BinaryReader bad(cut);
  CHECK_THROWS_AS(RingVector::deserialize(bad), Error);
}
