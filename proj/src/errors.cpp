/*
 * Copyright 2026 The sisverify Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sisv/errors.hpp"

#include <sstream>

namespace sisv {

namespace {

std::string format_parse_error(const std::string& message, std::size_t line,
                               std::size_t column,
                               const std::vector<std::string>& expected) {
  std::ostringstream os;
  os << "line " << line;
  if (column > 0) os << ", column " << column;
  os << ": " << message;
  if (!expected.empty()) {
    os << " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) os << (i + 1 == expected.size() ? " or " : ", ");
      os << expected[i];
    }
    os << ")";
  }
  return os.str();
}

std::string join_events(const std::string& message,
                        const std::vector<std::string>& events) {
  std::string out = message + ":";
  for (const auto& e : events) out += " [" + e + "]";
  return out;
}

}  // namespace

ParseError::ParseError(std::string message, std::size_t line,
                       std::size_t column, std::vector<std::string> expected)
    : Error(format_parse_error(message, line, column, expected)),
      detail_(std::move(message)),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

AlphabetError::AlphabetError(const std::string& message,
                             std::vector<std::string> events)
    : Error(join_events(message, events)), events_(std::move(events)) {}

ResourceError::ResourceError(const std::string& message, std::size_t reached,
                             double residual)
    : Error(message), reached_(reached), residual_(residual) {}

}  // namespace sisv
