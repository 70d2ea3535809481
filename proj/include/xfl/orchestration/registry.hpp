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

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "xfl/data/table.hpp"
#include "xfl/orchestration/config.hpp"
#include "xfl/transport/endpoint.hpp"

namespace xfl::orchestration {

// Everything one party needs to execute one pipeline stage. Stages see each
// other only through declared files: inputs resolve against the config
// directory or, with the "workdir:" prefix, against the session directory
// where earlier stages wrote their outputs.
struct StageContext {
  int stage = 0;
  std::string session_id;
  uint64_t task_seed = 0;
  nlohmann::json params;  // merged operator params
  Role role = Role::kTrainer;
  transport::Endpoint* ep = nullptr;
  std::vector<transport::PartyId> participants;  // data parties, roster order
  std::map<std::string, Role> roles;             // party name -> stage role
  std::filesystem::path out_dir;      // <workdir>/<session>/<stage>/<self>/
  std::filesystem::path session_dir;  // <workdir>/<session>/
  std::filesystem::path input_root;   // directory of the config file
  std::function<void(const nlohmann::json&)> emit_metrics;

  // Independent sub-seed for this stage: mix64(task_seed, hash(tag), stage).
  uint64_t stage_seed(std::string_view tag) const;
  std::vector<transport::PartyId> with_role(Role role) const;
};

// A registered operator: its preset (the full key schema with defaults;
// null marks a required or free-form value), a config-time validator with
// path-precise errors, and the role-dispatching routine.
struct OperatorDef {
  std::string name;
  nlohmann::json preset;
  std::function<void(const nlohmann::json& params,
                     const std::map<std::string, Role>& roles,
                     const std::string& path)>
      validate;
  std::function<void(StageContext&)> run;
};

const OperatorDef* find_operator(const std::string& name);  // null if unknown
std::vector<std::string> operator_names();

// Overlays user params on the preset. Object values merge recursively; an
// empty-object preset accepts arbitrary keys (party maps); a null preset
// accepts any user value. Unknown keys throw ValidationError naming the
// path.
nlohmann::json apply_preset(const nlohmann::json& preset,
                            const nlohmann::json& user,
                            const std::string& path);

// "workdir:<rel>" resolves under the session directory (prior stage
// outputs); other relative paths resolve under the config directory.
std::filesystem::path resolve_input(const StageContext& ctx,
                                    const std::string& ref);

// Loads this party's dataset named in params.input.dataset; the table is
// read with labels exactly when the party is the stage's label trainer.
data::Table load_stage_table(const StageContext& ctx);

// Creates parent directories and writes the file; throws IoError.
void write_text(const std::filesystem::path& path, std::string_view content);

}  // namespace xfl::orchestration
