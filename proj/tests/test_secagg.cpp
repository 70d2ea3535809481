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
#include <thread>

#include "support/net_fixture.hpp"
#include "xfl/common/error.hpp"
#include "xfl/secagg/secagg.hpp"

using namespace xfl;
using namespace xfl::secagg;
using numeric::FixedPointParams;
using numeric::RingVector;

namespace {

// Derives per-pair seeds directly (no transport) for pure-function tests.
std::vector<MaskPlan> local_plans(int parties, const std::string& session) {
  auto rng = crypto::seeded_random(4711);
  std::vector<MaskPlan> plans(parties);
  for (int i = 0; i < parties; ++i) {
    plans[i].self = PartyId{i, "node-" + std::to_string(i + 1)};
    plans[i].session_id = session;
  }
  for (int i = 0; i < parties; ++i) {
    for (int j = i + 1; j < parties; ++j) {
      crypto::Digest seed;
      rng->fill(seed);
      plans[i].peer_seeds[j] = seed;
      plans[j].peer_seeds[i] = seed;
    }
  }
  return plans;
}

RingVector random_update(std::mt19937_64& gen, size_t n,
                         FixedPointParams fp = {}) {
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  std::vector<double> xs(n);
  for (auto& x : xs) x = dist(gen);
  return RingVector::encode(xs, fp);
}

}  // namespace

TEST_CASE("negotiated pair seeds agree on both sides, aggregator holds none") {
  testing::NetFixture fx(
      {{0, "node-1"}, {1, "node-2"}, {2, "node-3"}, {3, "assist"}}, "sess-n");
  // Only the three trainers mask; the aggregator never joins negotiation.
  std::vector<PartyId> masking(fx.roster.begin(), fx.roster.end() - 1);

  std::vector<MaskPlan> plans(3);
  std::vector<std::thread> threads;
  for (int i = 0; i < 3; ++i) {
    threads.emplace_back([&, i] {
      auto rng = crypto::seeded_random(100 + i);
      plans[i] = negotiate_masks(fx.ep(i), masking, "sess-n", *rng);
    });
  }
  for (auto& t : threads) t.join();

  for (int i = 0; i < 3; ++i) {
    CHECK(plans[i].peer_seeds.size() == 2);  // P-1 seeds per party
    CHECK(!plans[i].peer_seeds.contains(i));
  }
  CHECK(plans[0].peer_seeds.at(1) == plans[1].peer_seeds.at(0));
  CHECK(plans[0].peer_seeds.at(2) == plans[2].peer_seeds.at(0));
  CHECK(plans[1].peer_seeds.at(2) == plans[2].peer_seeds.at(1));
  // Distinct pairs get distinct seeds.
  CHECK(plans[0].peer_seeds.at(1) != plans[0].peer_seeds.at(2));
}

TEST_CASE("a party with no peers masks to the identity") {
  auto plans = local_plans(1, "solo");
  std::mt19937_64 gen(3);
  RingVector u = random_update(gen, 16);
  MaskedVector masked = mask_update(u, plans[0], 0);
  CHECK(masked.data == u);
}

TEST_CASE("two parties with zero updates produce exact ring negatives") {
  auto plans = local_plans(2, "zeros");
  FixedPointParams fp{};
  RingVector zero = RingVector::zeros(32, fp);
  MaskedVector a = mask_update(zero, plans[0], 1);
  MaskedVector b = mask_update(zero, plans[1], 1);
  for (size_t i = 0; i < 32; ++i) {
    uint64_t neg = ~b.data.elements()[i] + 1;
    CHECK(a.data.elements()[i] == neg);
  }
  CHECK(aggregate_masked({a, b}) == zero);
}

TEST_CASE("masks cancel bitwise for 2..5 parties") {
  std::mt19937_64 gen(17);
  for (int parties = 2; parties <= 5; ++parties) {
    auto plans = local_plans(parties, "p" + std::to_string(parties));
    std::vector<RingVector> updates;
    std::vector<MaskedVector> masked;
    RingVector plain_sum = RingVector::zeros(64, {});
    for (int i = 0; i < parties; ++i) {
      updates.push_back(random_update(gen, 64));
      plain_sum.add_in_place(updates.back());
      masked.push_back(mask_update(updates[i], plans[i], 7));
    }
    RingVector aggregate = aggregate_masked(masked);
    CHECK(aggregate == plain_sum);  // bitwise equality, not approximate
  }
}

TEST_CASE("aggregation order does not matter") {
  auto plans = local_plans(4, "order");
  std::mt19937_64 gen(29);
  std::vector<MaskedVector> masked;
  for (int i = 0; i < 4; ++i)
    masked.push_back(mask_update(random_update(gen, 20), plans[i], 0));
  RingVector forward = aggregate_masked(masked);
  std::reverse(masked.begin(), masked.end());
  CHECK(aggregate_masked(masked) == forward);
}

TEST_CASE("decoded aggregate tracks the real-valued sum") {
  const int parties = 5;
  auto plans = local_plans(parties, "real");
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  FixedPointParams fp{};
  const size_t n = 40;

  std::vector<std::vector<double>> raw(parties, std::vector<double>(n));
  std::vector<MaskedVector> masked;
  for (int p = 0; p < parties; ++p) {
    for (auto& x : raw[p]) x = dist(gen);
    masked.push_back(mask_update(RingVector::encode(raw[p], fp), plans[p], 3));
  }
  std::vector<double> decoded = aggregate_masked(masked).decode();
  // Each party contributes at most half a quantum of rounding error.
  const double tol = parties * std::ldexp(1.0, -fp.scale_bits);
  for (size_t i = 0; i < n; ++i) {
    double expect = 0;
    for (int p = 0; p < parties; ++p) expect += raw[p][i];
    CHECK(std::fabs(decoded[i] - expect) <= tol);
  }
}

TEST_CASE("pads are fresh across rounds") {
  auto plans = local_plans(2, "fresh");
  RingVector zero = RingVector::zeros(16, {});
  MaskedVector r0 = mask_update(zero, plans[0], 0);
  MaskedVector r1 = mask_update(zero, plans[0], 1);
  CHECK(r0.data.elements() != r1.data.elements());
  // Same round, same inputs: deterministic.
  MaskedVector again = mask_update(zero, plans[0], 0);
  CHECK(again.data == r0.data);
}

TEST_CASE("a single masked vector passes a byte-uniformity smoke test") {
  auto plans = local_plans(2, "chi");
  const size_t n = 8192;
  std::vector<double> xs(n, 1.0);  // decidedly non-uniform input
  MaskedVector masked = mask_update(RingVector::encode(xs, {}), plans[0], 0);

  std::array<uint64_t, 256> hist{};
  for (uint64_t e : masked.data.elements())
    for (int b = 0; b < 8; ++b) hist[(e >> (8 * b)) & 0xFF]++;
  const double expected = static_cast<double>(n * 8) / 256.0;
  double chi2 = 0;
  for (uint64_t o : hist) {
    double d = static_cast<double>(o) - expected;
    chi2 += d * d / expected;
  }
  // Upper 1% point of chi-squared with 255 degrees of freedom, from an
  // independent statistics package.
  CHECK(chi2 < 310.45738821990585);
}

TEST_CASE("aggregate_masked rejects malformed input sets") {
  auto plans = local_plans(3, "bad");
  std::mt19937_64 gen(53);
  RingVector u = random_update(gen, 8);
  MaskedVector a = mask_update(u, plans[0], 0);
  MaskedVector b = mask_update(u, plans[1], 0);
  MaskedVector b_round1 = mask_update(u, plans[1], 1);

  CHECK_THROWS_AS(aggregate_masked({}), Error);
  CHECK_THROWS_AS(aggregate_masked({a, b_round1}), Error);  // round mismatch
  CHECK_THROWS_AS(aggregate_masked({a, a}), Error);         // duplicate sender
  MaskedVector short_vec = mask_update(random_update(gen, 4), plans[1], 0);
  CHECK_THROWS_AS(aggregate_masked({a, short_vec}), Error);
}

TEST_CASE("masked vectors roundtrip the wire encoding") {
  auto plans = local_plans(2, "wire");
  std::mt19937_64 gen(61);
  MaskedVector m = mask_update(random_update(gen, 12), plans[0], 9);
  Bytes wire = m.serialize();
  BinaryReader reader(wire);
  MaskedVector back = MaskedVector::deserialize(reader);
  CHECK(reader.done());
  CHECK(back.data == m.data);
  CHECK(back.sender == m.sender);
  CHECK(back.round == 9);
}
