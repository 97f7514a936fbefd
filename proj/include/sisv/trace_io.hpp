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

#ifndef SISV_TRACE_IO_HPP_
#define SISV_TRACE_IO_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sisv/domain.hpp"

namespace sisv {

inline constexpr std::string_view kTraceHeader = "# sisv trace v1";

/// Trace plus the source line of every event, for diagnostics.
struct TraceFile {
  TimedTrace events;
  std::vector<std::size_t> lines;
};

/**
 * Parses one trace record. Returns nullopt for blank and comment lines and
 * throws ParseError (carrying `line_number`) for anything else unrecognized.
 */
std::optional<Event> parse_trace_line(std::string_view line, std::size_t line_number);

TraceFile parse_trace(std::string_view text);
TraceFile read_trace_file(const std::string& path);

/// Header line followed by one canonical record per event.
std::string format_trace(const TimedTrace& trace);

/// Reads the whole stream into a string.
std::string slurp(std::istream& in);
/// Reads a file, throwing ConfigError when it cannot be opened.
std::string read_text_file(const std::string& path);

}  // namespace sisv

#endif  // SISV_TRACE_IO_HPP_
