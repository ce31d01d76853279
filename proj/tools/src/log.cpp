/* Copyright 2026 The pbrk Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "pbrk_cli/log.hpp"

#include <cstdlib>
#include <ostream>
#include <string>

#include "pbrk/error.hpp"

namespace pbrk::cli {

LogLevel level_from_env() {
  const char* raw = std::getenv("PBRK_LOG");
  if (!raw || !*raw) return LogLevel::info;
  const std::string v(raw);
  if (v == "error") return LogLevel::error;
  if (v == "warn") return LogLevel::warn;
  if (v == "info") return LogLevel::info;
  if (v == "debug") return LogLevel::debug;
  throw InvalidInput("PBRK_LOG must be error, warn, info or debug (got '" + v + "')");
}

void Logger::log(LogLevel level, std::string_view msg) const {
  if (level > level_) return;
  static constexpr const char* kTags[] = {"error", "warn", "info", "debug"};
  sink_ << "[" << kTags[static_cast<int>(level)] << "] " << msg << '\n';
}

}  // namespace pbrk::cli
