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

#include "xfl/transport/tcp.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>

#include "xfl/common/error.hpp"
#include "xfl/common/log.hpp"

namespace xfl::transport {

namespace {

struct HostPort {
  std::string host;
  uint16_t port;
};

HostPort split_address(const std::string& address) {
  size_t colon = address.rfind(':');
  if (colon == std::string::npos || colon + 1 == address.size())
    throw ValidationError("address must be host:port, got: " + address);
  int port = std::stoi(address.substr(colon + 1));
  if (port < 0 || port > 65535)
    throw ValidationError("port out of range in: " + address);
  return {address.substr(0, colon), static_cast<uint16_t>(port)};
}

// Reads exactly n bytes; false on EOF or error.
bool read_full(int fd, uint8_t* out, size_t n) {
  size_t got = 0;
  while (got < n) {
    ssize_t r = ::recv(fd, out + got, n - got, 0);
    if (r <= 0) return false;
    got += static_cast<size_t>(r);
  }
  return true;
}

bool write_full(int fd, const uint8_t* data, size_t n) {
  size_t sent = 0;
  while (sent < n) {
    ssize_t w = ::send(fd, data + sent, n - sent, MSG_NOSIGNAL);
    if (w <= 0) return false;
    sent += static_cast<size_t>(w);
  }
  return true;
}

uint64_t read_be(const uint8_t* p, int width) {
  uint64_t v = 0;
  for (int i = 0; i < width; ++i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

TcpBackend::TcpBackend(std::string self_name, std::string listen_address,
                       ChannelConfig config)
    : self_name_(std::move(self_name)),
      listen_address_(std::move(listen_address)),
      config_(config) {}

TcpBackend::~TcpBackend() { stop(); }

void TcpBackend::start(std::function<void(const Bytes&)> sink) {
  sink_ = std::move(sink);
  HostPort hp = split_address(listen_address_);

  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw TransportError("socket() failed");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(hp.port);
  if (::inet_pton(AF_INET, hp.host.c_str(), &addr.sin_addr) != 1) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (::getaddrinfo(hp.host.c_str(), nullptr, &hints, &res) != 0 || !res)
      throw TransportError("cannot resolve listen host: " + hp.host);
    addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
    ::freeaddrinfo(res);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0)
    throw TransportError("cannot bind " + listen_address_ + ": " +
                         std::strerror(errno));
  if (::listen(listen_fd_, 64) < 0) throw TransportError("listen() failed");

  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  char host[64];
  ::inet_ntop(AF_INET, &bound.sin_addr, host, sizeof(host));
  bound_address_ = std::string(host) + ":" + std::to_string(ntohs(bound.sin_port));

  acceptor_ = std::thread([this] { accept_loop(); });
}

std::string TcpBackend::bound_address() const { return bound_address_; }

void TcpBackend::stop() {
  bool expected = false;
  if (!stopping_.compare_exchange_strong(expected, true)) return;
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
  }
  {
    std::lock_guard lock(mu_);
    for (auto& [name, fd] : connections_) {
      ::shutdown(fd, SHUT_RDWR);
      ::close(fd);
    }
    connections_.clear();
    // Readers own and close their fds; shutdown just unblocks them.
    for (int fd : accepted_) ::shutdown(fd, SHUT_RDWR);
  }
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> readers;
  {
    std::lock_guard lock(mu_);
    readers.swap(readers_);
  }
  for (auto& t : readers) t.join();
}

void TcpBackend::set_peer(const std::string& name,
                          const std::string& address) {
  std::lock_guard lock(mu_);
  peers_[name] = address;
}

void TcpBackend::accept_loop() {
  for (;;) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (stopping_) return;
      continue;
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    std::lock_guard lock(mu_);
    if (stopping_) {
      ::close(fd);
      return;
    }
    accepted_.push_back(fd);
    readers_.emplace_back([this, fd] { reader_loop(fd); });
  }
}

void TcpBackend::reader_loop(int fd) {
  // Reassembles normative frames: magic+header_len, header, payload_len,
  // payload+crc. The raw frame bytes go to the sink unparsed.
  for (;;) {
    uint8_t head[8];
    if (!read_full(fd, head, 8)) break;
    if (std::memcmp(head, "XFL1", 4) != 0) {
      log()->warn("{}: tcp peer sent bad magic, closing", self_name_);
      break;
    }
    uint64_t header_len = read_be(head + 4, 4);
    if (8 + header_len + 8 + 4 > config_.max_frame_bytes) break;

    Bytes frame(8 + header_len + 8);
    std::memcpy(frame.data(), head, 8);
    if (!read_full(fd, frame.data() + 8, header_len + 8)) break;
    uint64_t payload_len = read_be(frame.data() + 8 + header_len, 8);
    if (frame.size() + payload_len + 4 > config_.max_frame_bytes) break;

    size_t prefix = frame.size();
    frame.resize(prefix + payload_len + 4);
    if (!read_full(fd, frame.data() + prefix, payload_len + 4)) break;
    if (sink_) sink_(frame);
  }
  ::close(fd);
}

int TcpBackend::connect_to(const std::string& address) {
  HostPort hp = split_address(address);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(hp.port);
  if (::inet_pton(AF_INET, hp.host.c_str(), &addr.sin_addr) != 1) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (::getaddrinfo(hp.host.c_str(), nullptr, &hints, &res) != 0 || !res)
      return -1;
    addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
    ::freeaddrinfo(res);
  }

  auto deadline = std::chrono::steady_clock::now() + config_.connect_timeout;
  for (;;) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) return -1;
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0) {
      int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      return fd;
    }
    ::close(fd);
    if (stopping_ || std::chrono::steady_clock::now() >= deadline) return -1;
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
}

void TcpBackend::transmit(const std::string& to, Bytes frame) {
  std::unique_lock lock(mu_);
  auto peer_it = peers_.find(to);
  if (peer_it == peers_.end()) {
    log()->warn("{}: no address for peer {}", self_name_, to);
    return;
  }
  std::string address = peer_it->second;

  int fd = -1;
  auto conn_it = connections_.find(to);
  if (conn_it != connections_.end()) fd = conn_it->second;

  for (int attempt = 0; attempt < 2; ++attempt) {
    if (fd < 0) {
      lock.unlock();
      fd = connect_to(address);
      lock.lock();
      if (fd < 0) return;  // unreachable: drop, retransmission handles it
      auto raced = connections_.find(to);
      if (raced != connections_.end()) {
        // Another thread connected while we were unlocked; keep one socket.
        ::close(fd);
        fd = raced->second;
      } else {
        connections_[to] = fd;
      }
    }
    if (write_full(fd, frame.data(), frame.size())) return;
    ::close(fd);
    connections_.erase(to);
    fd = -1;
  }
}

}  // namespace xfl::transport
