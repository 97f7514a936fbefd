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

#ifndef SISV_ERRORS_HPP_
#define SISV_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sisv {

/// Root of every error the toolkit throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid controller configuration, scenario or other user-supplied setting.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A value outside the domain of an operation (negative speed, pfd > 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/**
 * Malformed input text. Line and column are 1-based; column 0 means the whole
 * line. `expected` lists the token classes the parser would have accepted.
 */
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t line, std::size_t column = 0,
             std::vector<std::string> expected = {});

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

/// Events used by an implementation that the specification does not know.
class AlphabetError : public Error {
 public:
  AlphabetError(const std::string& message, std::vector<std::string> events);
  const std::vector<std::string>& events() const { return events_; }

 private:
  std::vector<std::string> events_;
};

/// A state, trace or iteration budget was exhausted.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& message, std::size_t reached,
                double residual = 0.0);
  std::size_t reached() const { return reached_; }
  double residual() const { return residual_; }

 private:
  std::size_t reached_;
  double residual_;
};

}  // namespace sisv

#endif  // SISV_ERRORS_HPP_
