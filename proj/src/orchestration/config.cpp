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

#include "xfl/orchestration/config.hpp"

#include <algorithm>
#include <set>

#include "xfl/common/error.hpp"
#include "xfl/orchestration/registry.hpp"

namespace xfl::orchestration {

namespace {

using nlohmann::json;

[[noreturn]] void fail_at(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail_at(path + "." + key, "missing required field");
  return *it;
}

std::string require_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail_at(path, "must be a string");
  const std::string s = v.get<std::string>();
  if (s.empty()) fail_at(path, "must not be empty");
  return s;
}

// Session ids and party names become directory components.
std::string require_name(const json& v, const std::string& path) {
  const std::string s = require_string(v, path);
  const bool ok = std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
           c == '_' || c == '-';
  });
  if (!ok) fail_at(path, "may only contain [A-Za-z0-9._-], got '" + s + "'");
  return s;
}

void reject_unknown_keys(const json& obj,
                         std::initializer_list<const char*> allowed,
                         const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end()) {
      fail_at(path + "." + key, "unknown field");
    }
  }
}

PartyConfig parse_endpoint(const json& v, const std::string& path) {
  if (!v.is_object()) fail_at(path, "must be an object");
  PartyConfig p;
  p.name = require_name(member(v, "name", path), path + ".name");
  p.address = require_string(member(v, "address", path), path + ".address");
  return p;
}

std::vector<Role> parse_roles(const json& v, size_t n_stages,
                              const std::string& path) {
  if (!v.is_array() || v.empty()) {
    fail_at(path, "must be a non-empty array of role names");
  }
  if (v.size() != 1 && v.size() != n_stages) {
    fail_at(path, "need 1 role or one per operator (" +
                      std::to_string(n_stages) + "), got " +
                      std::to_string(v.size()));
  }
  std::vector<Role> roles;
  for (size_t i = 0; i < v.size(); ++i) {
    const std::string item_path = path + "[" + std::to_string(i) + "]";
    const std::string name = require_string(v[i], item_path);
    const Role role = role_from_name(name);  // rethrown below with path
    if (role == Role::kScheduler) {
      fail_at(item_path,
              "'scheduler' is reserved for the scheduler entry "
              "(exactly one scheduler per task)");
    }
    roles.push_back(role);
  }
  if (roles.size() == 1) roles.assign(n_stages, roles.front());
  return roles;
}

}  // namespace

Role role_from_name(const std::string& name) {
  if (name == "scheduler") return Role::kScheduler;
  if (name == "label_trainer") return Role::kLabelTrainer;
  if (name == "trainer") return Role::kTrainer;
  if (name == "assist_trainer") return Role::kAssistTrainer;
  throw ValidationError(
      "unknown role '" + name +
      "' (expected scheduler, label_trainer, trainer, or assist_trainer)");
}

const std::string& role_name(Role role) {
  static const std::string names[] = {"scheduler", "label_trainer", "trainer",
                                      "assist_trainer"};
  return names[static_cast<size_t>(role)];
}

std::map<std::string, Role> TaskConfig::stage_roles(size_t stage) const {
  std::map<std::string, Role> out;
  for (const PartyConfig& p : parties) {
    out.emplace(p.name, p.stage_roles.at(stage));
  }
  return out;
}

const PartyConfig* TaskConfig::find_party(const std::string& name) const {
  if (scheduler.name == name) return &scheduler;
  for (const PartyConfig& p : parties) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

TaskConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail_at("config", "top level must be an object");
  reject_unknown_keys(
      doc, {"session_id", "seed", "scheduler", "parties", "operators"},
      "config");

  TaskConfig cfg;
  cfg.session_id =
      require_name(member(doc, "session_id", "config"), "config.session_id");

  if (const auto it = doc.find("seed"); it != doc.end()) {
    const bool ok = it->is_number_unsigned() ||
                    (it->is_number_integer() && it->get<int64_t>() >= 0);
    if (!ok) fail_at("config.seed", "must be a non-negative integer");
    cfg.seed = it->get<uint64_t>();
  }

  const json& ops = member(doc, "operators", "config");
  if (!ops.is_array() || ops.empty()) {
    fail_at("config.operators", "must be a non-empty array");
  }
  const size_t n_stages = ops.size();

  cfg.scheduler = parse_endpoint(member(doc, "scheduler", "config"),
                                 "config.scheduler");

  const json& parties = member(doc, "parties", "config");
  if (!parties.is_array() || parties.empty()) {
    fail_at("config.parties", "must be a non-empty array");
  }
  std::set<std::string> names{cfg.scheduler.name};
  for (size_t i = 0; i < parties.size(); ++i) {
    const std::string path = "config.parties[" + std::to_string(i) + "]";
    const json& pj = parties[i];
    if (!pj.is_object()) fail_at(path, "must be an object");
    reject_unknown_keys(pj, {"name", "address", "roles"}, path);
    PartyConfig p = parse_endpoint(pj, path);
    if (!names.insert(p.name).second) {
      fail_at(path + ".name", "duplicate party name '" + p.name + "'");
    }
    try {
      p.stage_roles =
          parse_roles(member(pj, "roles", path), n_stages, path + ".roles");
    } catch (const ValidationError& e) {
      // role_from_name throws without a path; keep messages path-precise.
      const std::string what = e.what();
      if (what.rfind(path, 0) == 0) throw;
      throw ValidationError(path + ".roles: " + what);
    }
    cfg.parties.push_back(std::move(p));
  }

  for (size_t k = 0; k < n_stages; ++k) {
    const std::string path = "config.operators[" + std::to_string(k) + "]";
    const json& oj = ops[k];
    if (!oj.is_object()) fail_at(path, "must be an object");
    reject_unknown_keys(oj, {"name", "params"}, path);
    OperatorSpec spec;
    spec.name = require_string(member(oj, "name", path), path + ".name");
    const OperatorDef* def = find_operator(spec.name);
    if (def == nullptr) {
      std::string known;
      for (const std::string& n : operator_names()) {
        known += known.empty() ? n : ", " + n;
      }
      fail_at(path + ".name",
              "unknown operator '" + spec.name + "' (known: " + known + ")");
    }
    json user = json::object();
    if (const auto it = oj.find("params"); it != oj.end()) {
      if (!it->is_object()) fail_at(path + ".params", "must be an object");
      user = *it;
    }
    spec.params = apply_preset(def->preset, user, path + ".params");

    // Map this stage's roles once so the operator can check its counts.
    std::map<std::string, Role> roles;
    for (const PartyConfig& p : cfg.parties) {
      roles.emplace(p.name, p.stage_roles.at(k));
    }
    def->validate(spec.params, roles, path);
    cfg.operators.push_back(std::move(spec));
  }
  return cfg;
}

const std::string& party_state_name(PartyState state) {
  static const std::string names[] = {"pending", "running", "succeeded",
                                      "failed"};
  return names[static_cast<size_t>(state)];
}

void TaskStatus::advance(int stage) {
  if (stage < current_stage) {
    throw Error("task status regressed from stage " +
                std::to_string(current_stage) + " to " +
                std::to_string(stage));
  }
  current_stage = stage;
}

nlohmann::json TaskStatus::to_json() const {
  json j;
  j["current_stage"] = current_stage;
  j["finished"] = finished;
  j["failure"] = failure;
  j["stages"] = json::array();
  for (const auto& stage : stages) {
    json s = json::object();
    for (const auto& [party, cell] : stage) {
      s[party] = {{"state", party_state_name(cell.state)},
                  {"metrics", cell.metrics},
                  {"error", cell.error}};
    }
    j["stages"].push_back(std::move(s));
  }
  return j;
}

}  // namespace xfl::orchestration
