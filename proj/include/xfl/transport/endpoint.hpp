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

#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xfl/transport/channel.hpp"
#include "xfl/transport/frame.hpp"
#include "xfl/transport/party.hpp"

namespace xfl::transport {

// Reliable, exactly-once, per-stream FIFO messaging over a best-effort
// Backend. Sends block until the receiver acknowledges (at-least-once
// retransmission with exponential backoff); receivers deduplicate by seq and
// release messages to the application in seq order per (sender, stage_key).
//
// Thread model: send/recv/broadcast/gather may run concurrently from any
// threads; ingest() is invoked by backend delivery threads. Each (sender,
// receiver, stage_key) stream has a single logical producer.
class Endpoint {
 public:
  Endpoint(PartyId self, Roster roster, std::string session_id,
           ChannelConfig config, Backend& backend);

  // Blocks until acked; throws TransportError when retries are exhausted.
  void send(const PartyId& to, const std::string& stage_key, Bytes payload);

  // Blocks until the next in-order message of the stream arrives; throws
  // TimeoutError.
  Bytes recv(const std::string& stage_key, const PartyId& from,
             Duration timeout);
  Bytes recv(const std::string& stage_key, const PartyId& from);

  // Parallel reliable send to every member; self receives inline. Throws
  // TransportError naming every unreachable member.
  void broadcast(const std::vector<PartyId>& members,
                 const std::string& stage_key, const Bytes& payload);

  // One payload per member; throws TimeoutError naming missing members.
  std::map<PartyId, Bytes> gather(const std::vector<PartyId>& members,
                                  const std::string& stage_key,
                                  Duration timeout);

  // Entry point for backend delivery threads; consumes one wire frame.
  void ingest(const Bytes& frame);

  const PartyId& self() const { return self_; }
  const Roster& roster() const { return roster_; }
  const std::string& session_id() const { return session_id_; }
  PartyId party(const std::string& name) const;

 private:
  struct StreamKey {
    std::string peer;
    std::string stage_key;
    auto operator<=>(const StreamKey&) const = default;
  };
  struct RecvStream {
    uint64_t next_seq = 0;
    std::map<uint64_t, Bytes> pending;  // out-of-order arrivals
  };

  void deliver_local(const std::string& stage_key, const Bytes& payload);
  void send_ack(const Envelope& env);

  const PartyId self_;
  const Roster roster_;
  const std::string session_id_;
  const ChannelConfig config_;
  Backend& backend_;

  std::mutex mu_;
  std::condition_variable app_cv_;
  std::condition_variable ack_cv_;
  std::map<StreamKey, uint64_t> send_seq_;
  std::map<StreamKey, RecvStream> recv_streams_;
  std::map<StreamKey, std::deque<Bytes>> inbox_;
  std::set<std::tuple<std::string, std::string, uint64_t>> acked_;
};

}  // namespace xfl::transport
