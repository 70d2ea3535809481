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
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <thread>

#include "xfl/crypto/rng.hpp"
#include "xfl/transport/channel.hpp"

namespace xfl::transport {

// Shared-memory network for standalone mode and tests: every party in one
// process, frames moved by a single delivery thread. Per directed link an
// optional FaultSpec injects seeded drops and latency; drop decisions and
// latency draws are deterministic given the seed and the submission order
// on that link.
class InprocNetwork {
 public:
  InprocNetwork();
  ~InprocNetwork();

  InprocNetwork(const InprocNetwork&) = delete;
  InprocNetwork& operator=(const InprocNetwork&) = delete;

  // Registers the frame sink (normally Endpoint::ingest) for a party.
  void attach(const std::string& name, std::function<void(const Bytes&)> sink);
  void detach(const std::string& name);

  // Installs fault injection on the directed link from -> to.
  void set_fault(const std::string& from, const std::string& to,
                 const FaultSpec& spec);

  // Backend handle bound to the sending party's name (for fault lookup).
  std::unique_ptr<Backend> backend_for(const std::string& self_name);

  struct LinkStats {
    uint64_t submitted = 0;
    uint64_t dropped = 0;
    uint64_t delivered = 0;
  };
  LinkStats stats(const std::string& from, const std::string& to) const;

 private:
  struct Link {
    FaultSpec spec;
    std::unique_ptr<crypto::RandomSource> rng;
    LinkStats stats;
  };
  struct Pending {
    std::chrono::steady_clock::time_point due;
    uint64_t order;  // tie-break so equal deadlines keep submission order
    std::string to;
    Bytes frame;
    bool operator>(const Pending& o) const {
      return std::tie(due, order) > std::tie(o.due, o.order);
    }
  };

  void submit(const std::string& from, const std::string& to, Bytes frame);
  void run();

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::map<std::string, std::function<void(const Bytes&)>> sinks_;
  std::map<std::pair<std::string, std::string>, Link> links_;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
  uint64_t order_counter_ = 0;
  bool stopping_ = false;
  std::thread delivery_;
};

}  // namespace xfl::transport
