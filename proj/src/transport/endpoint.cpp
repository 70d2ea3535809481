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

#include "xfl/transport/endpoint.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "xfl/common/error.hpp"
#include "xfl/common/log.hpp"

namespace xfl::transport {

void ChannelConfig::validate() const {
  if (send_retry_limit < 1)
    throw ValidationError("send_retry_limit must be >= 1");
  if (max_frame_bytes < (size_t{1} << 20))
    throw ValidationError("max_frame_bytes must be >= 1 MiB");
  if (retry_backoff_base.count() <= 0 || retry_backoff_factor < 1.0)
    throw ValidationError("retry backoff schedule must be positive");
}

Duration ChannelConfig::backoff(int attempt) const {
  double ms = static_cast<double>(retry_backoff_base.count()) *
              std::pow(retry_backoff_factor, attempt);
  ms = std::min(ms, static_cast<double>(retry_backoff_cap.count()));
  return Duration{static_cast<Duration::rep>(ms)};
}

void FaultSpec::validate() const {
  if (drop_probability < 0.0 || drop_probability >= 1.0)
    throw ValidationError("drop_probability must be in [0, 1)");
  if (latency_min.count() < 0 || latency_max < latency_min)
    throw ValidationError("latency range must be ordered and non-negative");
}

Endpoint::Endpoint(PartyId self, Roster roster, std::string session_id,
                   ChannelConfig config, Backend& backend)
    : self_(std::move(self)),
      roster_(std::move(roster)),
      session_id_(std::move(session_id)),
      config_(config),
      backend_(backend) {
  config_.validate();
}

PartyId Endpoint::party(const std::string& name) const {
  for (const PartyId& p : roster_)
    if (p.name == name) return p;
  throw ValidationError("unknown party: " + name);
}

void Endpoint::deliver_local(const std::string& stage_key,
                             const Bytes& payload) {
  std::lock_guard lock(mu_);
  inbox_[StreamKey{self_.name, stage_key}].push_back(payload);
  app_cv_.notify_all();
}

void Endpoint::send(const PartyId& to, const std::string& stage_key,
                    Bytes payload) {
  if (to.name == self_.name) {
    deliver_local(stage_key, payload);
    return;
  }

  Envelope env;
  env.session_id = session_id_;
  env.stage_key = stage_key;
  env.sender = self_;
  env.receiver = to;
  env.payload = std::move(payload);
  {
    std::lock_guard lock(mu_);
    env.seq = send_seq_[StreamKey{to.name, stage_key}]++;
  }
  Bytes frame = encode_frame(env, config_.max_frame_bytes);
  auto ack_key = std::make_tuple(to.name, stage_key, env.seq);

  for (int attempt = 0; attempt < config_.send_retry_limit; ++attempt) {
    backend_.transmit(to.name, frame);
    std::unique_lock lock(mu_);
    bool acked = ack_cv_.wait_for(lock, config_.backoff(attempt), [&] {
      return acked_.contains(ack_key);
    });
    if (acked) {
      acked_.erase(ack_key);
      return;
    }
  }
  throw TransportError("delivery to " + to.name + " failed after " +
                       std::to_string(config_.send_retry_limit) +
                       " attempts (stage " + stage_key + ")");
}

Bytes Endpoint::recv(const std::string& stage_key, const PartyId& from) {
  return recv(stage_key, from, config_.recv_default_timeout);
}

Bytes Endpoint::recv(const std::string& stage_key, const PartyId& from,
                     Duration timeout) {
  StreamKey key{from.name, stage_key};
  std::unique_lock lock(mu_);
  bool ready = app_cv_.wait_for(lock, timeout, [&] {
    auto it = inbox_.find(key);
    return it != inbox_.end() && !it->second.empty();
  });
  if (!ready)
    throw TimeoutError("recv timed out on " + stage_key + " from " +
                       from.name);
  auto& queue = inbox_[key];
  Bytes payload = std::move(queue.front());
  queue.pop_front();
  return payload;
}

void Endpoint::broadcast(const std::vector<PartyId>& members,
                         const std::string& stage_key, const Bytes& payload) {
  std::vector<std::thread> workers;
  std::mutex failures_mu;
  std::vector<std::string> failures;
  for (const PartyId& member : members) {
    if (member.name == self_.name) {
      deliver_local(stage_key, payload);
      continue;
    }
    workers.emplace_back([&, member] {
      try {
        send(member, stage_key, payload);
      } catch (const std::exception& e) {
        std::lock_guard lock(failures_mu);
        failures.push_back(member.name + ": " + e.what());
      }
    });
  }
  for (auto& w : workers) w.join();
  if (!failures.empty()) {
    std::string msg = "broadcast on " + stage_key + " failed for";
    for (const auto& f : failures) msg += " [" + f + "]";
    throw TransportError(msg);
  }
}

std::map<PartyId, Bytes> Endpoint::gather(const std::vector<PartyId>& members,
                                          const std::string& stage_key,
                                          Duration timeout) {
  std::vector<std::thread> workers;
  std::mutex out_mu;
  std::map<PartyId, Bytes> out;
  std::vector<std::string> missing;
  for (const PartyId& member : members) {
    workers.emplace_back([&, member] {
      try {
        Bytes payload = recv(stage_key, member, timeout);
        std::lock_guard lock(out_mu);
        out.emplace(member, std::move(payload));
      } catch (const std::exception&) {
        std::lock_guard lock(out_mu);
        missing.push_back(member.name);
      }
    });
  }
  for (auto& w : workers) w.join();
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    std::string msg = "gather on " + stage_key + " missing parties:";
    for (const auto& name : missing) msg += " " + name;
    throw TimeoutError(msg);
  }
  return out;
}

void Endpoint::send_ack(const Envelope& env) {
  Envelope ack;
  ack.session_id = env.session_id;
  ack.stage_key = std::string(kAckPrefix) + env.stage_key;
  ack.sender = self_;
  ack.receiver = env.sender;
  ack.seq = env.seq;
  backend_.transmit(env.sender.name, encode_frame(ack, config_.max_frame_bytes));
}

void Endpoint::ingest(const Bytes& frame) {
  Envelope env;
  try {
    env = decode_frame(frame, config_.max_frame_bytes);
  } catch (const std::exception& e) {
    log()->warn("{}: discarding malformed frame: {}", self_.name, e.what());
    return;
  }
  if (env.session_id != session_id_ || env.receiver.name != self_.name) {
    log()->warn("{}: discarding misrouted frame (session {}, receiver {})",
                self_.name, env.session_id, env.receiver.name);
    return;
  }

  if (env.stage_key.starts_with(kAckPrefix)) {
    std::string orig = env.stage_key.substr(std::string_view(kAckPrefix).size());
    std::lock_guard lock(mu_);
    acked_.emplace(env.sender.name, std::move(orig), env.seq);
    ack_cv_.notify_all();
    return;
  }

  // Data frame: always re-ack (the previous ack may have been lost), then
  // deduplicate and release any now-contiguous prefix in seq order.
  send_ack(env);
  std::lock_guard lock(mu_);
  StreamKey key{env.sender.name, env.stage_key};
  RecvStream& stream = recv_streams_[key];
  if (env.seq < stream.next_seq) return;  // duplicate of a delivered frame
  stream.pending.emplace(env.seq, std::move(env.payload));
  bool released = false;
  while (!stream.pending.empty() &&
         stream.pending.begin()->first == stream.next_seq) {
    inbox_[key].push_back(std::move(stream.pending.begin()->second));
    stream.pending.erase(stream.pending.begin());
    ++stream.next_seq;
    released = true;
  }
  if (released) app_cv_.notify_all();
}

}  // namespace xfl::transport
