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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace xfl::orchestration {

// Scheduler drives the pipeline; the other three are data-plane roles. A
// party's role may change from stage to stage.
enum class Role { kScheduler, kLabelTrainer, kTrainer, kAssistTrainer };

Role role_from_name(const std::string& name);  // throws ValidationError
const std::string& role_name(Role role);

struct PartyConfig {
  std::string name;
  std::string address;  // "host:port" for TCP; ignored in standalone mode
  std::vector<Role> stage_roles;  // one entry per operator stage
};

struct OperatorSpec {
  std::string name;        // registry key
  nlohmann::json params;   // operator preset already merged underneath
};

// One task: a session, a single scheduler, the data-plane parties, and an
// ordered operator pipeline. Every randomized step derives its stream from
// `seed`, so two runs of one config produce identical artifacts.
struct TaskConfig {
  std::string session_id;
  uint64_t seed = 0;
  PartyConfig scheduler;             // exactly one per task
  std::vector<PartyConfig> parties;  // roster order fixes party ordinals
  std::vector<OperatorSpec> operators;

  std::map<std::string, Role> stage_roles(size_t stage) const;
  const PartyConfig* find_party(const std::string& name) const;
};

// Parses and fully validates a task document; error messages carry the JSON
// path of the offending field (e.g. "config.operators[1].params.train.mu").
// Defaults come from each operator's preset.
TaskConfig parse_config(const std::string& json_text);

enum class PartyState { kPending, kRunning, kSucceeded, kFailed };
const std::string& party_state_name(PartyState state);

// The scheduler's view of pipeline progress: per stage and party a state
// plus the last metric snapshot. Stage progression is monotone.
struct TaskStatus {
  struct PartyCell {
    PartyState state = PartyState::kPending;
    nlohmann::json metrics = nlohmann::json::object();
    std::string error;
  };

  int current_stage = -1;
  bool finished = false;  // every stage succeeded
  std::string failure;    // human-readable cause when the pipeline aborted
  std::vector<std::map<std::string, PartyCell>> stages;

  void advance(int stage);  // throws Error on regression
  nlohmann::json to_json() const;
};

}  // namespace xfl::orchestration
