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

#include "xfl/orchestration/runner.hpp"

#include <fstream>
#include <future>
#include <memory>
#include <string>
#include <vector>

#include "xfl/common/error.hpp"
#include "xfl/transport/inproc.hpp"

namespace xfl::orchestration {

namespace {

using nlohmann::json;

Bytes wire(const json& msg) { return to_bytes(msg.dump()); }

std::string_view as_text(const Bytes& payload) {
  return {reinterpret_cast<const char*>(payload.data()), payload.size()};
}

json parse_wire(const Bytes& payload, const char* what) {
  try {
    return json::parse(as_text(payload));
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed ") + what + " message: " +
                        e.what());
  }
}

// Appends spec-shaped JSON lines: {"stage", "party", "state", "metrics"}.
class StatusWriter {
 public:
  StatusWriter(const std::filesystem::path& dir, int stage, std::string party)
      : stage_(stage), party_(std::move(party)) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    out_.open(dir / "status.jsonl", std::ios::app);
    if (!out_) {
      throw IoError("cannot open status log in " + dir.string());
    }
  }

  void write(const std::string& state, const json& metrics) {
    out_ << "{\"stage\": " << stage_ << ", \"party\": " << json(party_).dump()
         << ", \"state\": " << json(state).dump()
         << ", \"metrics\": " << metrics.dump() << "}\n";
    out_.flush();
  }

 private:
  int stage_;
  std::string party_;
  std::ofstream out_;
};

std::vector<transport::PartyId> data_parties(const transport::Endpoint& ep,
                                             const TaskConfig& cfg) {
  std::vector<transport::PartyId> out;
  for (const PartyConfig& p : cfg.parties) out.push_back(ep.party(p.name));
  return out;
}

// Best effort: a dead party must not mask the abort for the others.
void broadcast_control(transport::Endpoint& ep,
                       const std::vector<transport::PartyId>& parties,
                       const json& msg) {
  const Bytes payload = wire(msg);
  for (const transport::PartyId& p : parties) {
    try {
      ep.send(p, kStageControl, payload);
    } catch (const TransportError&) {
    }
  }
}

}  // namespace

transport::Roster session_roster(const TaskConfig& cfg) {
  transport::Roster roster;
  roster.push_back({0, cfg.scheduler.name});
  for (size_t i = 0; i < cfg.parties.size(); ++i) {
    roster.push_back({static_cast<int>(i) + 1, cfg.parties[i].name});
  }
  return roster;
}

TaskStatus run_scheduler(transport::Endpoint& ep, const TaskConfig& cfg,
                         const RunOptions& opts) {
  const std::vector<transport::PartyId> parties = data_parties(ep, cfg);
  TaskStatus status;
  status.stages.resize(cfg.operators.size());
  for (size_t k = 0; k < cfg.operators.size(); ++k) {
    for (const PartyConfig& p : cfg.parties) {
      status.stages[k].emplace(p.name, TaskStatus::PartyCell{});
    }
  }

  const auto abort_stage = [&](size_t k, const std::string& cause) {
    status.failure = cause;
    broadcast_control(ep, parties,
                      json{{"type", "abort"},
                           {"stage", k},
                           {"cause", cause}});
  };

  for (size_t k = 0; k < cfg.operators.size(); ++k) {
    status.advance(static_cast<int>(k));
    const OperatorSpec& op = cfg.operators[k];

    json stage_msg = {{"type", "stage"},
                      {"stage", k},
                      {"operator", op.name},
                      {"seed", cfg.seed},
                      {"params", op.params},
                      {"participants", json::array()},
                      {"roles", json::object()}};
    for (const PartyConfig& p : cfg.parties) {
      stage_msg["participants"].push_back(p.name);
      stage_msg["roles"][p.name] = role_name(p.stage_roles.at(k));
    }

    // Deliver the stage config, then hold the start barrier until every
    // party acknowledged readiness.
    try {
      const Bytes payload = wire(stage_msg);
      for (const transport::PartyId& p : parties) {
        ep.send(p, kStageControl, payload);
      }
      ep.gather(parties, kStageReady, opts.ready_timeout);
    } catch (const TransportError& e) {
      abort_stage(k, "stage " + std::to_string(k) + " (" + op.name +
                         "): party unreachable: " + e.what());
      return status;
    }
    broadcast_control(ep, parties, json{{"type", "start"}, {"stage", k}});
    for (auto& [name, cell] : status.stages[k]) {
      (void)name;
      cell.state = PartyState::kRunning;
    }

    std::map<transport::PartyId, Bytes> done;
    try {
      done = ep.gather(parties, kStageDone, opts.done_timeout);
    } catch (const TransportError& e) {
      abort_stage(k, "stage " + std::to_string(k) + " (" + op.name +
                         "): timed out waiting for completion: " + e.what());
      return status;
    }

    std::string first_failure;
    for (const auto& [party, payload] : done) {
      TaskStatus::PartyCell& cell = status.stages[k].at(party.name);
      try {
        const json d = parse_wire(payload, "completion");
        const std::string state = d.at("state").get<std::string>();
        cell.metrics = d.value("metrics", json::object());
        cell.error = d.value("error", "");
        cell.state = state == "succeeded" ? PartyState::kSucceeded
                                          : PartyState::kFailed;
      } catch (const std::exception& e) {
        cell.state = PartyState::kFailed;
        cell.error = e.what();
      }
      if (cell.state == PartyState::kFailed && first_failure.empty()) {
        first_failure = "stage " + std::to_string(k) + " (" + op.name +
                        "): party " + party.name + ": " + cell.error;
      }
    }
    if (!first_failure.empty()) {
      abort_stage(k, first_failure);
      return status;
    }
  }

  broadcast_control(
      ep, parties,
      json{{"type", "finish"}, {"stages", cfg.operators.size()}});
  status.finished = true;
  return status;
}

void run_party(transport::Endpoint& ep, const transport::PartyId& scheduler,
               const std::filesystem::path& workdir,
               const std::filesystem::path& input_root,
               const RunOptions& opts) {
  const std::string& self = ep.self().name;
  for (;;) {
    const json msg = parse_wire(
        ep.recv(kStageControl, scheduler, opts.control_timeout), "control");
    const std::string type = msg.at("type").get<std::string>();
    if (type == "finish") return;
    if (type == "abort") {
      throw Error("task aborted: " + msg.value("cause", "unknown cause"));
    }
    if (type != "stage") {
      throw ProtocolError("unexpected control message '" + type + "'");
    }

    const int stage = msg.at("stage").get<int>();
    StageContext ctx;
    ctx.stage = stage;
    ctx.session_id = ep.session_id();
    ctx.task_seed = msg.at("seed").get<uint64_t>();
    ctx.params = msg.at("params");
    ctx.ep = &ep;
    for (const auto& name : msg.at("participants")) {
      ctx.participants.push_back(ep.party(name.get<std::string>()));
    }
    for (const auto& [name, role] : msg.at("roles").items()) {
      ctx.roles.emplace(name, role_from_name(role.get<std::string>()));
    }
    const auto role_it = ctx.roles.find(self);
    if (role_it == ctx.roles.end()) {
      throw ProtocolError("stage " + std::to_string(stage) +
                          " assigns no role to party '" + self + "'");
    }
    ctx.role = role_it->second;
    ctx.session_dir = workdir / ctx.session_id;
    ctx.out_dir = ctx.session_dir / std::to_string(stage) / self;
    ctx.input_root = input_root;

    // Readiness ack, then wait for the start barrier.
    ep.send(scheduler, kStageReady,
            wire(json{{"stage", stage}, {"party", self}}));
    const json start = parse_wire(
        ep.recv(kStageControl, scheduler, opts.control_timeout), "control");
    if (start.at("type").get<std::string>() == "abort") {
      throw Error("task aborted: " + start.value("cause", "unknown cause"));
    }
    if (start.at("type").get<std::string>() != "start") {
      throw ProtocolError("expected start signal for stage " +
                          std::to_string(stage));
    }

    StatusWriter writer(ctx.out_dir, stage, self);
    json last_metrics = json::object();
    ctx.emit_metrics = [&](const json& m) {
      last_metrics = m;
      writer.write("running", m);
    };
    writer.write("running", json::object());

    std::string error;
    const OperatorDef* def = find_operator(msg.at("operator"));
    if (def == nullptr) {
      error = "unknown operator '" +
              msg.at("operator").get<std::string>() + "'";
    } else {
      try {
        def->run(ctx);
      } catch (const std::exception& e) {
        error = e.what();
      }
    }

    const bool ok = error.empty();
    writer.write(ok ? "succeeded" : "failed",
                 ok ? last_metrics : json{{"error", error}});
    ep.send(scheduler, kStageDone,
            wire(json{{"stage", stage},
                      {"party", self},
                      {"state", ok ? "succeeded" : "failed"},
                      {"error", error},
                      {"metrics", last_metrics}}));
  }
}

TaskStatus standalone_run(const TaskConfig& cfg,
                          const std::filesystem::path& workdir,
                          const std::filesystem::path& input_root,
                          const RunOptions& opts) {
  transport::InprocNetwork net;
  const transport::Roster roster = session_roster(cfg);
  const transport::ChannelConfig channel_cfg;

  struct Node {
    std::unique_ptr<transport::Backend> backend;
    std::unique_ptr<transport::Endpoint> ep;
  };
  std::vector<Node> nodes(roster.size());
  for (size_t i = 0; i < roster.size(); ++i) {
    nodes[i].backend = net.backend_for(roster[i].name);
    nodes[i].ep = std::make_unique<transport::Endpoint>(
        roster[i], roster, cfg.session_id, channel_cfg, *nodes[i].backend);
    net.attach(roster[i].name, [ep = nodes[i].ep.get()](const Bytes& frame) {
      ep->ingest(frame);
    });
  }

  auto scheduler_work = std::async(std::launch::async, [&] {
    return run_scheduler(*nodes[0].ep, cfg, opts);
  });
  std::vector<std::future<void>> party_work;
  for (size_t i = 1; i < roster.size(); ++i) {
    party_work.push_back(std::async(std::launch::async, [&, i] {
      run_party(*nodes[i].ep, roster[0], workdir, input_root, opts);
    }));
  }

  const TaskStatus status = scheduler_work.get();
  std::string party_error;
  for (auto& w : party_work) {
    try {
      w.get();
    } catch (const std::exception& e) {
      if (party_error.empty()) party_error = e.what();
    }
  }
  for (const transport::PartyId& p : roster) net.detach(p.name);

  // Party aborts are the consequence of a scheduler-reported failure; an
  // exception without one means the control protocol itself broke.
  if (status.failure.empty() && !party_error.empty()) {
    throw Error("standalone run failed: " + party_error);
  }
  return status;
}

}  // namespace xfl::orchestration
