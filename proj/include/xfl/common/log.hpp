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

#include <spdlog/spdlog.h>

#include <string>

namespace xfl {

// Routes spdlog output to stderr so stdout stays clean for CLI reports, and
// applies a level name from --log-level {trace,debug,info,warn,error,off}.
void init_logging(const std::string& level = "info");

// Process-wide logger; self-initializes at level "warn" if init_logging has
// not run (keeps library code usable from tests without setup).
std::shared_ptr<spdlog::logger> log();

}  // namespace xfl
