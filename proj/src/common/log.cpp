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

#include "xfl/common/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>

#include "xfl/common/error.hpp"

namespace xfl {

namespace {

std::shared_ptr<spdlog::logger> make_logger() {
  auto logger = spdlog::stderr_color_mt("xfl");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
  spdlog::set_level(spdlog::level::warn);
  return logger;
}

}  // namespace

std::shared_ptr<spdlog::logger> log() {
  static std::shared_ptr<spdlog::logger> logger = make_logger();
  return logger;
}

void init_logging(const std::string& level) {
  log();
  auto lv = spdlog::level::from_str(level);
  if (lv == spdlog::level::off && level != "off") {
    throw ValidationError("unknown log level: " + level);
  }
  spdlog::set_level(lv);
}

}  // namespace xfl
