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

#include <algorithm>
#include <atomic>
#include <thread>

#include "xfl/common/error.hpp"
#include "xfl/transport/endpoint.hpp"
#include "xfl/transport/frame.hpp"
#include "xfl/transport/inproc.hpp"
#include "xfl/transport/tcp.hpp"

using namespace xfl;
using namespace xfl::transport;
using namespace std::chrono_literals;

namespace {

Roster three_parties() {
  return {{0, "node-1"}, {1, "node-2"}, {2, "assist"}};
}

struct InprocFixture {
  InprocNetwork net;
  Roster roster = three_parties();
  ChannelConfig config;
  std::vector<std::unique_ptr<Backend>> backends;
  std::vector<std::unique_ptr<Endpoint>> endpoints;

  explicit InprocFixture(ChannelConfig cfg = {}) : config(cfg) {
    for (const PartyId& p : roster) {
      backends.push_back(net.backend_for(p.name));
      endpoints.push_back(std::make_unique<Endpoint>(p, roster, "sess-1",
                                                     config, *backends.back()));
      Endpoint* ep = endpoints.back().get();
      net.attach(p.name, [ep](const Bytes& f) { ep->ingest(f); });
    }
  }
  ~InprocFixture() {
    // Quiesce delivery into endpoints before they are destroyed.
    for (const PartyId& p : roster) net.detach(p.name);
  }
  Endpoint& ep(size_t i) { return *endpoints[i]; }
};

}  // namespace

TEST_CASE("frame encoding roundtrips and is bit-exact") {
  Envelope env;
  env.session_id = "sess-42";
  env.stage_key = "secagg/masked_update";
  env.sender = {0, "node-1"};
  env.receiver = {2, "assist"};
  env.seq = 7;
  env.payload = {0xDE, 0xAD, 0xBE, 0xEF};

  Bytes frame = encode_frame(env);
  // Layout: magic, u32 header length, header text, u64 payload length,
  // payload, u32 crc of the payload.
  const std::string header =
      "session_id:sess-42\nstage_key:secagg/masked_update\n"
      "sender:node-1\nreceiver:assist\nseq:7\n";
  REQUIRE(frame.size() == 4 + 4 + header.size() + 8 + 4 + 4);
  CHECK(std::string(frame.begin(), frame.begin() + 4) == "XFL1");
  CHECK(frame[7] == header.size());
  CHECK(std::string(frame.begin() + 8, frame.begin() + 8 + header.size()) ==
        header);
  // CRC32 of de ad be ef, cross-checked against a zlib reference value.
  Bytes tail(frame.end() - 4, frame.end());
  CHECK(to_hex(tail) == "7c9ca35a");

  Envelope back = decode_frame(frame);
  CHECK(back.session_id == env.session_id);
  CHECK(back.stage_key == env.stage_key);
  CHECK(back.sender.name == "node-1");
  CHECK(back.receiver.name == "assist");
  CHECK(back.seq == 7);
  CHECK(back.payload == env.payload);
}

TEST_CASE("frame decoding rejects corruption") {
  Envelope env;
  env.session_id = "s";
  env.stage_key = "k";
  env.sender = {0, "a"};
  env.receiver = {1, "b"};
  env.payload = {1, 2, 3};
  Bytes frame = encode_frame(env);

  Bytes bad_magic = frame;
  bad_magic[0] = 'Y';
  CHECK_THROWS_AS(decode_frame(bad_magic), ProtocolError);

  Bytes bad_crc = frame;
  bad_crc[bad_crc.size() - 1] ^= 0xFF;
  CHECK_THROWS_AS(decode_frame(bad_crc), ProtocolError);

  Bytes flipped_payload = frame;
  flipped_payload[flipped_payload.size() - 6] ^= 0x01;
  CHECK_THROWS_AS(decode_frame(flipped_payload), ProtocolError);

  Bytes truncated(frame.begin(), frame.end() - 1);
  CHECK_THROWS_AS(decode_frame(truncated), ProtocolError);

  CHECK_THROWS_AS(decode_frame(frame, 8), ProtocolError);  // over the limit
}

TEST_CASE("lossless send/recv roundtrip preserves payloads") {
  InprocFixture fx;
  Bytes payload = {9, 8, 7, 6, 5};
  fx.ep(0).send(fx.roster[1], "stage/a", payload);
  CHECK(fx.ep(1).recv("stage/a", fx.roster[0], 2s) == payload);

  // Self-send short-circuits the backend.
  fx.ep(0).send(fx.roster[0], "stage/self", payload);
  CHECK(fx.ep(0).recv("stage/self", fx.roster[0], 2s) == payload);
}

TEST_CASE("streams are independent and FIFO per (sender, stage)") {
  InprocFixture fx;
  for (uint64_t i = 0; i < 20; ++i) {
    BinaryWriter w;
    w.u64(i);
    fx.ep(0).send(fx.roster[2], i % 2 ? "stage/odd" : "stage/even",
                  std::move(w).take());
  }
  uint64_t expect_even = 0, expect_odd = 1;
  for (int i = 0; i < 10; ++i) {
    Bytes even = fx.ep(2).recv("stage/even", fx.roster[0], 2s);
    BinaryReader re(even);
    CHECK(re.u64() == expect_even);
    expect_even += 2;
    Bytes odd = fx.ep(2).recv("stage/odd", fx.roster[0], 2s);
    BinaryReader ro(odd);
    CHECK(ro.u64() == expect_odd);
    expect_odd += 2;
  }
}

TEST_CASE("recv times out when nothing arrives") {
  InprocFixture fx;
  CHECK_THROWS_AS(fx.ep(1).recv("stage/nothing", fx.roster[0], 50ms),
                  TimeoutError);
}

TEST_CASE("broadcast delivers identical payloads to every member") {
  InprocFixture fx;
  Bytes payload = to_bytes("global-model-bytes");
  fx.ep(2).broadcast(fx.roster, "hfl/global", payload);
  CHECK(fx.ep(0).recv("hfl/global", fx.roster[2], 2s) == payload);
  CHECK(fx.ep(1).recv("hfl/global", fx.roster[2], 2s) == payload);
  CHECK(fx.ep(2).recv("hfl/global", fx.roster[2], 2s) == payload);
}

TEST_CASE("gather collects one payload per member in any arrival order") {
  InprocFixture fx;
  std::thread t1([&] { fx.ep(0).send(fx.roster[2], "hfl/update", {10}); });
  std::thread t2([&] { fx.ep(1).send(fx.roster[2], "hfl/update", {20}); });
  auto got = fx.ep(2).gather({fx.roster[0], fx.roster[1]}, "hfl/update", 2s);
  t1.join();
  t2.join();
  REQUIRE(got.size() == 2);
  CHECK(got.at(fx.roster[0]) == Bytes{10});
  CHECK(got.at(fx.roster[1]) == Bytes{20});

  // A missing member is reported by name.
  fx.ep(0).send(fx.roster[2], "hfl/update2", {30});
  try {
    fx.ep(2).gather({fx.roster[0], fx.roster[1]}, "hfl/update2", 100ms);
    FAIL("expected timeout");
  } catch (const TimeoutError& e) {
    CHECK(std::string(e.what()).find("node-2") != std::string::npos);
  }
}

TEST_CASE("duplicate and reordered frames deliver exactly once in order") {
  InprocFixture fx;
  Bytes f0 = encode_frame(Envelope{"sess-1", "stage/r", fx.roster[0],
                                   fx.roster[1], 0, Bytes{0}});
  Bytes f1 = encode_frame(Envelope{"sess-1", "stage/r", fx.roster[0],
                                   fx.roster[1], 1, Bytes{1}});
  Bytes f2 = encode_frame(Envelope{"sess-1", "stage/r", fx.roster[0],
                                   fx.roster[1], 2, Bytes{2}});
  // Inject out of order with duplicates, as a retrying lossy link would.
  fx.ep(1).ingest(f2);
  fx.ep(1).ingest(f0);
  fx.ep(1).ingest(f0);
  fx.ep(1).ingest(f1);
  fx.ep(1).ingest(f2);
  for (uint8_t i = 0; i < 3; ++i)
    CHECK(fx.ep(1).recv("stage/r", fx.roster[0], 1s) == Bytes{i});
  CHECK_THROWS_AS(fx.ep(1).recv("stage/r", fx.roster[0], 50ms), TimeoutError);
}

TEST_CASE("frames from other sessions or receivers are discarded") {
  InprocFixture fx;
  fx.ep(1).ingest(encode_frame(
      Envelope{"other-session", "stage/x", fx.roster[0], fx.roster[1], 0,
               Bytes{1}}));
  fx.ep(1).ingest(encode_frame(
      Envelope{"sess-1", "stage/x", fx.roster[0], fx.roster[2], 0, Bytes{2}}));
  CHECK_THROWS_AS(fx.ep(1).recv("stage/x", fx.roster[0], 50ms), TimeoutError);
}

TEST_CASE("send fails loudly once retries are exhausted") {
  ChannelConfig cfg;
  cfg.send_retry_limit = 2;
  cfg.retry_backoff_base = 10ms;
  InprocFixture fx(cfg);
  // 100% ack loss: data arrives but acks die on the reverse link.
  FaultSpec all_drop;
  all_drop.drop_probability = 0.999999;
  all_drop.seed = 5;
  fx.net.set_fault("node-2", "node-1", all_drop);
  CHECK_THROWS_AS(fx.ep(0).send(fx.roster[1], "stage/doomed", {1}),
                  TransportError);
  // The payload still reached the receiver exactly once (dedup).
  CHECK(fx.ep(1).recv("stage/doomed", fx.roster[0], 1s) == Bytes{1});
}

TEST_CASE("seeded faults reproduce identical drop patterns") {
  FaultSpec spec;
  spec.drop_probability = 0.5;
  spec.seed = 99;
  auto run = [&]() -> std::vector<bool> {
    InprocNetwork net;
    net.set_fault("a", "b", spec);
    std::atomic<int> received{0};
    net.attach("b", [&](const Bytes&) { ++received; });
    auto backend = net.backend_for("a");
    std::vector<bool> pattern;
    for (int i = 0; i < 64; ++i) {
      int before = received.load();
      backend->transmit("b", Bytes{static_cast<uint8_t>(i)});
      // In-proc delivery with zero latency is synchronous enough to poll.
      for (int spin = 0; spin < 1000 && received.load() == before; ++spin)
        std::this_thread::sleep_for(100us);
      pattern.push_back(received.load() > before);
    }
    return pattern;
  };
  auto p1 = run(), p2 = run();
  CHECK(p1 == p2);
  CHECK(std::count(p1.begin(), p1.end(), false) > 10);  // some drops happened
}

TEST_CASE("reliable delivery under heavy loss and latency") {
  ChannelConfig cfg;
  cfg.send_retry_limit = 20;
  cfg.retry_backoff_base = 20ms;
  InprocFixture fx(cfg);
  FaultSpec lossy;
  lossy.drop_probability = 0.3;
  lossy.latency_min = 1ms;
  lossy.latency_max = 5ms;
  lossy.seed = 7;
  fx.net.set_fault("node-1", "node-2", lossy);
  lossy.seed = 8;
  fx.net.set_fault("node-2", "node-1", lossy);

  const int kMessages = 60;
  std::thread sender([&] {
    for (int i = 0; i < kMessages; ++i) {
      BinaryWriter w;
      w.u64(static_cast<uint64_t>(i));
      fx.ep(0).send(fx.roster[1], "stage/lossy", std::move(w).take());
    }
  });
  for (int i = 0; i < kMessages; ++i) {
    Bytes payload = fx.ep(1).recv("stage/lossy", fx.roster[0], 10s);
    BinaryReader r(payload);
    CHECK(r.u64() == static_cast<uint64_t>(i));
  }
  sender.join();
  CHECK(fx.net.stats("node-1", "node-2").dropped > 0);
}

TEST_CASE("tcp backend carries the same protocol end to end") {
  Roster roster = {{0, "alpha"}, {1, "beta"}};
  ChannelConfig cfg;

  TcpBackend net_a("alpha", "127.0.0.1:0", cfg);
  TcpBackend net_b("beta", "127.0.0.1:0", cfg);
  Endpoint ep_a(roster[0], roster, "tcp-sess", cfg, net_a);
  Endpoint ep_b(roster[1], roster, "tcp-sess", cfg, net_b);
  net_a.start([&](const Bytes& f) { ep_a.ingest(f); });
  net_b.start([&](const Bytes& f) { ep_b.ingest(f); });
  net_a.set_peer("beta", net_b.bound_address());
  net_b.set_peer("alpha", net_a.bound_address());

  Bytes big(100000);
  for (size_t i = 0; i < big.size(); ++i) big[i] = static_cast<uint8_t>(i);
  ep_a.send(roster[1], "tcp/blob", big);
  CHECK(ep_b.recv("tcp/blob", roster[0], 5s) == big);

  for (uint8_t i = 0; i < 10; ++i) ep_b.send(roster[0], "tcp/seq", {i});
  for (uint8_t i = 0; i < 10; ++i)
    CHECK(ep_a.recv("tcp/seq", roster[1], 5s) == Bytes{i});

  net_a.stop();
  net_b.stop();
}
