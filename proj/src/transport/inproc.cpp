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

#include "xfl/transport/inproc.hpp"

#include <vector>

#include "xfl/common/error.hpp"

namespace xfl::transport {

namespace {

class InprocHandleImpl final : public Backend {
 public:
  InprocHandleImpl(InprocNetwork* net, std::string self,
                   void (InprocNetwork::*submit)(const std::string&,
                                                 const std::string&, Bytes))
      : net_(net), self_(std::move(self)), submit_(submit) {}

  void transmit(const std::string& to, Bytes frame) override {
    (net_->*submit_)(self_, to, std::move(frame));
  }

 private:
  InprocNetwork* net_;
  std::string self_;
  void (InprocNetwork::*submit_)(const std::string&, const std::string&,
                                 Bytes);
};

}  // namespace

InprocNetwork::InprocNetwork() : delivery_([this] { run(); }) {}

InprocNetwork::~InprocNetwork() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  delivery_.join();
}

void InprocNetwork::attach(const std::string& name,
                           std::function<void(const Bytes&)> sink) {
  std::lock_guard lock(mu_);
  sinks_[name] = std::move(sink);
}

void InprocNetwork::detach(const std::string& name) {
  std::lock_guard lock(mu_);
  sinks_.erase(name);
}

void InprocNetwork::set_fault(const std::string& from, const std::string& to,
                              const FaultSpec& spec) {
  spec.validate();
  std::lock_guard lock(mu_);
  Link& link = links_[{from, to}];
  link.spec = spec;
  link.rng = crypto::seeded_random(spec.seed);
}

std::unique_ptr<Backend> InprocNetwork::backend_for(
    const std::string& self_name) {
  return std::make_unique<InprocHandleImpl>(this, self_name,
                                            &InprocNetwork::submit);
}

InprocNetwork::LinkStats InprocNetwork::stats(const std::string& from,
                                              const std::string& to) const {
  std::lock_guard lock(mu_);
  auto it = links_.find({from, to});
  return it == links_.end() ? LinkStats{} : it->second.stats;
}

void InprocNetwork::submit(const std::string& from, const std::string& to,
                           Bytes frame) {
  std::lock_guard lock(mu_);
  auto now = std::chrono::steady_clock::now();
  Pending item{now, order_counter_++, to, std::move(frame)};

  auto link_it = links_.find({from, to});
  if (link_it != links_.end()) {
    Link& link = link_it->second;
    ++link.stats.submitted;
    const FaultSpec& spec = link.spec;
    if (spec.drop_probability > 0.0) {
      // u64 draw mapped to [0,1); strictly below p drops the frame.
      double u = static_cast<double>(link.rng->next_u64()) /
                 static_cast<double>(UINT64_MAX);
      if (u < spec.drop_probability) {
        ++link.stats.dropped;
        return;
      }
    }
    Duration latency = spec.latency_min;
    if (spec.latency_max > spec.latency_min) {
      auto span = static_cast<uint64_t>(
          (spec.latency_max - spec.latency_min).count() + 1);
      latency = spec.latency_min + Duration{static_cast<Duration::rep>(
                                       link.rng->below(span))};
    }
    item.due = now + latency;
    ++link.stats.delivered;
  }

  queue_.push(std::move(item));
  cv_.notify_all();
}

void InprocNetwork::run() {
  std::unique_lock lock(mu_);
  for (;;) {
    if (queue_.empty()) {
      cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      continue;
    }
    auto due = queue_.top().due;
    if (std::chrono::steady_clock::now() < due) {
      cv_.wait_until(lock, due, [&] { return stopping_; });
      if (stopping_) return;
      continue;
    }
    // Safe to move: the element is popped immediately after.
    Pending item = std::move(const_cast<Pending&>(queue_.top()));
    queue_.pop();
    auto sink_it = sinks_.find(item.to);
    if (sink_it == sinks_.end()) continue;  // party gone: frame is lost
    auto sink = sink_it->second;
    lock.unlock();
    sink(item.frame);
    lock.lock();
  }
}

}  // namespace xfl::transport
