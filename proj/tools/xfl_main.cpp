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

// Command-line front end: validate configs, run one role of a distributed
// task over TCP, run a whole task standalone in-process, or print a metrics
// report from a workdir. Exit codes: 0 success, 1 validation/protocol
// failure, 2 environment/I-O failure.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xfl/common/error.hpp"
#include "xfl/common/log.hpp"
#include "xfl/orchestration/config.hpp"
#include "xfl/orchestration/runner.hpp"
#include "xfl/transport/endpoint.hpp"
#include "xfl/transport/tcp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace xfl;
using namespace xfl::orchestration;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;       // validation or protocol failure
constexpr int kEnvironment = 2;  // missing files, unwritable dirs, ...

std::string read_file_or_throw(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) {
    throw IoError("cannot read file: " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TaskConfig load_task(const fs::path& config_path) {
  return parse_config(read_file_or_throw(config_path));
}

// --workdir beats XFL_WORKDIR beats the current directory.
fs::path resolve_workdir(const std::string& flag) {
  if (!flag.empty()) return fs::path(flag);
  if (const char* env = std::getenv("XFL_WORKDIR"); env && *env) {
    return fs::path(env);
  }
  return fs::current_path();
}

// Relative dataset references in a config resolve against the config file's
// own directory, so shipped demos work from any cwd.
fs::path config_root(const fs::path& config_path) {
  return fs::absolute(config_path).parent_path();
}

// ---------------------------------------------------------------------------
// Report rendering. One row per (stage, party): final state plus whichever
// of the headline metrics the stage produced.

struct ReportRow {
  int stage = 0;
  std::string party;
  std::string state;
  json metrics;  // last reported metrics object
};

std::string metric_cell(const json& metrics, const char* key) {
  if (!metrics.is_object() || !metrics.contains(key)) return "-";
  return metrics.at(key).dump();
}

// The progress counter differs by family: rounds for horizontal stages,
// epochs for (V)LR, trees for XGBoost.
std::string epochs_cell(const json& m) {
  for (const char* key : {"round", "epoch", "tree"}) {
    if (m.is_object() && m.contains(key)) return m.at(key).dump();
  }
  return "-";
}

void print_table(const std::string& session,
                 const std::vector<ReportRow>& rows, std::ostream& out) {
  const std::vector<std::string> header = {"stage", "party",    "state",
                                           "ks",    "auc",      "accuracy",
                                           "loss",  "epochs"};
  std::vector<std::vector<std::string>> cells;
  for (const ReportRow& r : rows) {
    cells.push_back({std::to_string(r.stage), r.party, r.state,
                     metric_cell(r.metrics, "ks"), metric_cell(r.metrics, "auc"),
                     metric_cell(r.metrics, "accuracy"),
                     metric_cell(r.metrics, "loss"), epochs_cell(r.metrics)});
  }
  std::vector<size_t> width(header.size());
  for (size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  auto print_row = [&](const std::vector<std::string>& row) {
    for (size_t c = 0; c < row.size(); ++c) {
      out << (c ? "  " : "") << row[c]
          << std::string(width[c] - row[c].size(), ' ');
    }
    out << "\n";
  };
  out << "session " << session << "\n";
  print_row(header);
  for (const auto& row : cells) print_row(row);
}

std::vector<ReportRow> rows_from_status(const TaskStatus& status) {
  std::vector<ReportRow> rows;
  for (size_t k = 0; k < status.stages.size(); ++k) {
    for (const auto& [party, cell] : status.stages[k]) {
      rows.push_back({static_cast<int>(k), party,
                      party_state_name(cell.state), cell.metrics});
    }
  }
  return rows;
}

// Reads the JSON-lines status log and keeps the last record, whose metrics
// are the stage's final word for that party.
ReportRow row_from_log(const fs::path& log_path, int stage,
                       const std::string& party) {
  std::ifstream in(log_path);
  if (!in.good()) {
    throw IoError("cannot read status log: " + log_path.string());
  }
  ReportRow row{stage, party, "unknown", json::object()};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw IoError("corrupt status log " + log_path.string() + " line " +
                    std::to_string(line_no) + ": " + e.what());
    }
    row.state = rec.value("state", "unknown");
    if (rec.contains("metrics")) row.metrics = rec["metrics"];
  }
  return row;
}

// A session directory holds one numeric directory per stage, each with one
// directory per party.
std::vector<ReportRow> rows_from_session_dir(const fs::path& session_dir) {
  std::vector<ReportRow> rows;
  std::vector<int> stages;
  for (const auto& entry : fs::directory_iterator(session_dir)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (!name.empty() &&
        std::all_of(name.begin(), name.end(),
                    [](unsigned char c) { return std::isdigit(c); })) {
      stages.push_back(std::stoi(name));
    }
  }
  std::sort(stages.begin(), stages.end());
  for (int stage : stages) {
    const fs::path stage_dir = session_dir / std::to_string(stage);
    std::vector<std::string> parties;
    for (const auto& entry : fs::directory_iterator(stage_dir)) {
      if (entry.is_directory() &&
          fs::exists(entry.path() / "status.jsonl")) {
        parties.push_back(entry.path().filename().string());
      }
    }
    std::sort(parties.begin(), parties.end());
    for (const std::string& party : parties) {
      rows.push_back(
          row_from_log(stage_dir / party / "status.jsonl", stage, party));
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Verbs.

int cmd_validate(const fs::path& config_path) {
  const TaskConfig cfg = load_task(config_path);
  std::cout << "valid: session '" << cfg.session_id << "', "
            << cfg.parties.size() << " parties, " << cfg.operators.size()
            << " stage(s)\n";
  return kOk;
}

int cmd_standalone(const fs::path& config_path, const fs::path& workdir) {
  const TaskConfig cfg = load_task(config_path);
  std::error_code ec;
  fs::create_directories(workdir, ec);
  if (ec) {
    throw IoError("cannot create workdir " + workdir.string() + ": " +
                  ec.message());
  }
  const TaskStatus status =
      standalone_run(cfg, workdir, config_root(config_path));
  print_table(cfg.session_id, rows_from_status(status), std::cout);
  if (!status.finished || !status.failure.empty()) {
    std::cerr << "task failed: " << status.failure << "\n";
    return kFailed;
  }
  std::cout << "finished " << status.stages.size() << " stage(s), artifacts under "
            << (workdir / cfg.session_id).string() << "\n";
  return kOk;
}

int cmd_run(const fs::path& config_path, const std::string& role,
            const fs::path& workdir) {
  const TaskConfig cfg = load_task(config_path);
  const PartyConfig* self = cfg.find_party(role);
  if (self == nullptr) {
    throw ValidationError("role '" + role +
                          "' is neither the scheduler nor a party in the "
                          "config");
  }
  const bool is_scheduler = (self == &cfg.scheduler);
  if (!is_scheduler) {
    std::error_code ec;
    fs::create_directories(workdir, ec);
    if (ec) {
      throw IoError("cannot create workdir " + workdir.string() + ": " +
                    ec.message());
    }
  }

  const transport::Roster roster = session_roster(cfg);
  const transport::ChannelConfig channel_cfg;
  transport::TcpBackend backend(self->name, self->address, channel_cfg);
  const auto self_id =
      *std::find_if(roster.begin(), roster.end(),
                    [&](const transport::PartyId& p) { return p.name == role; });
  transport::Endpoint ep(self_id, roster, cfg.session_id, channel_cfg,
                         backend);
  backend.start([&ep](const Bytes& frame) { ep.ingest(frame); });
  backend.set_peer(cfg.scheduler.name, cfg.scheduler.address);
  for (const PartyConfig& p : cfg.parties) {
    backend.set_peer(p.name, p.address);
  }

  int rc = kOk;
  if (is_scheduler) {
    const TaskStatus status = run_scheduler(ep, cfg);
    print_table(cfg.session_id, rows_from_status(status), std::cout);
    if (!status.finished || !status.failure.empty()) {
      std::cerr << "task failed: " << status.failure << "\n";
      rc = kFailed;
    }
  } else {
    run_party(ep, roster[0], workdir, config_root(config_path));
    std::cout << role << ": all stages complete\n";
  }
  backend.stop();
  return rc;
}

int cmd_report(const fs::path& workdir, const std::string& session) {
  if (!fs::is_directory(workdir)) {
    throw IoError("workdir does not exist: " + workdir.string());
  }
  std::vector<std::string> sessions;
  if (!session.empty()) {
    sessions.push_back(session);
  } else {
    for (const auto& entry : fs::directory_iterator(workdir)) {
      if (entry.is_directory()) {
        sessions.push_back(entry.path().filename().string());
      }
    }
    std::sort(sessions.begin(), sessions.end());
  }
  bool printed = false;
  for (const std::string& s : sessions) {
    const fs::path dir = workdir / s;
    if (!fs::is_directory(dir)) {
      throw IoError("no such session under workdir: " + dir.string());
    }
    const std::vector<ReportRow> rows = rows_from_session_dir(dir);
    if (rows.empty()) continue;
    if (printed) std::cout << "\n";
    print_table(s, rows, std::cout);
    printed = true;
  }
  if (!printed) {
    throw IoError("no status records found under " + workdir.string());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xfl: federated learning at desk scale"};
  app.require_subcommand(1);

  std::string config_path;
  std::string role;
  std::string workdir_flag;
  std::string session;
  std::string log_level = "info";
  app.add_option("--log-level", log_level,
                 "trace|debug|info|warn|error|off")
      ->capture_default_str();

  CLI::App* validate = app.add_subcommand("validate", "Check a task config");
  validate->add_option("--config", config_path, "Task config (JSON)")
      ->required();

  CLI::App* run = app.add_subcommand(
      "run", "Run one role of a distributed task over TCP");
  run->add_option("--config", config_path, "Task config (JSON)")->required();
  run->add_option("--role", role, "Scheduler or party name from the config")
      ->required();
  run->add_option("--workdir", workdir_flag,
                  "Artifact root (default: $XFL_WORKDIR or cwd)");

  CLI::App* standalone = app.add_subcommand(
      "standalone", "Run every role of a task in one process");
  standalone->add_option("--config", config_path, "Task config (JSON)")
      ->required();
  standalone->add_option("--workdir", workdir_flag,
                         "Artifact root (default: $XFL_WORKDIR or cwd)");

  CLI::App* report = app.add_subcommand(
      "report", "Print per-stage metrics from a workdir");
  report->add_option("--workdir", workdir_flag,
                     "Artifact root (default: $XFL_WORKDIR or cwd)");
  report->add_option("--session", session,
                     "Only this session (default: all found)");

  CLI11_PARSE(app, argc, argv);

  try {
    init_logging(log_level);
    if (validate->parsed()) return cmd_validate(config_path);
    if (run->parsed()) {
      return cmd_run(config_path, role, resolve_workdir(workdir_flag));
    }
    if (standalone->parsed()) {
      return cmd_standalone(config_path, resolve_workdir(workdir_flag));
    }
    if (report->parsed()) {
      return cmd_report(resolve_workdir(workdir_flag), session);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kEnvironment;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kFailed;
}
