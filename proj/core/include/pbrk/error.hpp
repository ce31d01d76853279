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

#ifndef PBRK_ERROR_HPP_
#define PBRK_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pbrk {

// Base for every error raised by the library. The CLI maps the concrete
// subtype onto an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. Carries the source name and 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

// A value or structure violates an operation's precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss or parameter.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace pbrk

#endif  // PBRK_ERROR_HPP_
