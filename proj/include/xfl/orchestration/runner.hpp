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

#include "xfl/orchestration/config.hpp"
#include "xfl/orchestration/registry.hpp"
#include "xfl/transport/endpoint.hpp"

namespace xfl::orchestration {

// Control plane between the scheduler and the parties. Per stage the
// scheduler delivers the stage config, gathers readiness, signals start,
// and gathers completions; any failure turns the next control message into
// an abort, so stage k+1 never starts after a failure in stage k.
inline constexpr char kStageControl[] = "ctl/control";
inline constexpr char kStageReady[] = "ctl/ready";
inline constexpr char kStageDone[] = "ctl/done";

struct RunOptions {
  transport::Duration ready_timeout{30000};   // config delivery + readiness
  transport::Duration done_timeout{600000};   // stage execution
  transport::Duration control_timeout{600000};  // party's wait for control
};

// Scheduler first (ordinal 0), then the parties in config order; data-plane
// ordinals are thus independent of where the scheduler is hosted.
transport::Roster session_roster(const TaskConfig& cfg);

// Drives the pipeline to completion or first failure and returns the final
// status; never throws for party-side failures (they land in the status).
TaskStatus run_scheduler(transport::Endpoint& ep, const TaskConfig& cfg,
                         const RunOptions& opts = {});

// One data-plane party: executes operator stages strictly in delivered
// order, writes status lines and artifacts under
// <workdir>/<session>/<stage>/<party>/, reports completion per stage.
// Throws Error when the scheduler aborts the task.
void run_party(transport::Endpoint& ep, const transport::PartyId& scheduler,
               const std::filesystem::path& workdir,
               const std::filesystem::path& input_root,
               const RunOptions& opts = {});

// All roles as concurrent activities in one process over the in-proc
// backend; artifacts are byte-identical to a distributed run of the same
// config and seeds.
TaskStatus standalone_run(const TaskConfig& cfg,
                          const std::filesystem::path& workdir,
                          const std::filesystem::path& input_root,
                          const RunOptions& opts = {});

}  // namespace xfl::orchestration
