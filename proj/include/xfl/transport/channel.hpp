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

#include <chrono>
#include <cstdint>

#include "xfl/common/bytes.hpp"
#include "xfl/transport/frame.hpp"

namespace xfl::transport {

using Duration = std::chrono::milliseconds;

struct ChannelConfig {
  Duration connect_timeout{5000};
  int send_retry_limit = 10;
  // Ack wait after the k-th transmission: base * factor^k, capped.
  Duration retry_backoff_base{100};
  double retry_backoff_factor = 2.0;
  Duration retry_backoff_cap{5000};
  Duration recv_default_timeout{30000};
  size_t max_frame_bytes = kDefaultMaxFrameBytes;

  void validate() const;
  Duration backoff(int attempt) const;
};

// Deterministic loss/latency injection for one directed link (test-only).
// Given a fixed submission order on the link, the drop pattern and latency
// draws are a pure function of the seed.
struct FaultSpec {
  double drop_probability = 0.0;  // in [0, 1)
  Duration latency_min{0};
  Duration latency_max{0};
  uint64_t seed = 0;

  void validate() const;
};

// Best-effort frame mover: may drop, delay, or reorder; never corrupts.
// Reliability (acks, retries, dedup, per-stream ordering) lives above, in
// Endpoint, identically for every backend.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual void transmit(const std::string& to, Bytes frame) = 0;
};

}  // namespace xfl::transport
