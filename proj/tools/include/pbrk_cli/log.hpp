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

#ifndef PBRK_CLI_LOG_HPP_
#define PBRK_CLI_LOG_HPP_

#include <iosfwd>
#include <string_view>

namespace pbrk::cli {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

// Level from the PBRK_LOG environment variable (error|warn|info|debug);
// info when unset. Throws InvalidInput on an unknown value.
LogLevel level_from_env();

class Logger {
 public:
  Logger(std::ostream& sink, LogLevel level) : sink_(sink), level_(level) {}
  void log(LogLevel level, std::string_view msg) const;
  void info(std::string_view msg) const { log(LogLevel::info, msg); }
  void debug(std::string_view msg) const { log(LogLevel::debug, msg); }
  void warn(std::string_view msg) const { log(LogLevel::warn, msg); }
  void error(std::string_view msg) const { log(LogLevel::error, msg); }
  LogLevel level() const { return level_; }

 private:
  std::ostream& sink_;
  LogLevel level_;
};

}  // namespace pbrk::cli

#endif  // PBRK_CLI_LOG_HPP_
