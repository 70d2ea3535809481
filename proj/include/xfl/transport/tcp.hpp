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

#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "xfl/transport/channel.hpp"

namespace xfl::transport {

// One TCP listener per party plus a cache of outbound connections, framing
// exactly the normative wire format. Best-effort like every Backend: a
// transmit that hits a dead connection retries the connect once within the
// configured timeout, then gives up silently — the reliability layer above
// takes care of retransmission.
class TcpBackend final : public Backend {
 public:
  TcpBackend(std::string self_name, std::string listen_address,
             ChannelConfig config);
  ~TcpBackend() override;

  TcpBackend(const TcpBackend&) = delete;
  TcpBackend& operator=(const TcpBackend&) = delete;

  // Binds, listens, and starts the accept loop; sink receives raw frames.
  void start(std::function<void(const Bytes&)> sink);
  void stop();

  // Peer listen addresses, "host:port". May be called before or after start.
  void set_peer(const std::string& name, const std::string& address);

  // Actual bound address (resolves port 0 to the assigned port).
  std::string bound_address() const;

  void transmit(const std::string& to, Bytes frame) override;

 private:
  void accept_loop();
  void reader_loop(int fd);
  int connect_to(const std::string& address);

  const std::string self_name_;
  const std::string listen_address_;
  const ChannelConfig config_;

  std::function<void(const Bytes&)> sink_;
  std::atomic<bool> stopping_{false};
  int listen_fd_ = -1;
  std::string bound_address_;
  std::thread acceptor_;

  std::mutex mu_;
  std::map<std::string, std::string> peers_;
  std::map<std::string, int> connections_;  // peer name -> connected fd
  std::vector<int> accepted_;               // reader-owned inbound fds
  std::vector<std::thread> readers_;
};

}  // namespace xfl::transport
