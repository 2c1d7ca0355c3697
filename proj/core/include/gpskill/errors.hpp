// Copyright 2026 The gpskill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GPSKILL_ERRORS_HPP_
#define GPSKILL_ERRORS_HPP_

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gpskill {

// Raised when a precondition on caller-supplied data does not hold.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a factorization or solve fails or produces non-finite output.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by text parsers; carries the 1-based line number of the offence.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

using WarningSink = std::function<void(std::string_view)>;

// Replaces the process-wide warning sink. The default writes to stderr.
// Passing an empty function silences warnings. Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);

// Emits a non-fatal diagnostic through the current sink.
void warn(std::string_view message);

}  // namespace gpskill

#endif  // GPSKILL_ERRORS_HPP_
