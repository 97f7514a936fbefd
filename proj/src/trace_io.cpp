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

#include "sisv/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "sisv/errors.hpp"

namespace sisv {

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) words.push_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

Action parse_action(const std::vector<std::string_view>& w, std::size_t line_number) {
  if (w.size() < 2) {
    throw ParseError("missing action name", line_number, 0,
                     {"alert_on", "alert_off", "uvc_on", "uvc_off", "stop", "set_speed N"});
  }
  const auto name = w[1];
  auto only = [&](Action a) {
    if (w.size() != 2) {
      throw ParseError("unexpected token '" + std::string(w[2]) + "'", line_number);
    }
    return a;
  };
  if (name == "alert_on") return only(Action::activate_alert(true));
  if (name == "alert_off") return only(Action::activate_alert(false));
  if (name == "uvc_on") return only(Action::turn_uvc(true));
  if (name == "uvc_off") return only(Action::turn_uvc(false));
  if (name == "stop") return only(Action::stop_robot());
  if (name == "set_speed") {
    if (w.size() != 3) {
      throw ParseError("set_speed takes one speed value", line_number, 0,
                       {"nonnegative integer"});
    }
    int value = -1;
    const auto arg = w[2];
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), value);
    if (ec != std::errc() || ptr != arg.data() + arg.size() || value < 0) {
      throw ParseError("invalid speed '" + std::string(arg) + "'", line_number, 0,
                       {"nonnegative integer"});
    }
    return Action::set_speed(value);
  }
  throw ParseError("unknown action '" + std::string(name) + "'", line_number, 0,
                   {"alert_on", "alert_off", "uvc_on", "uvc_off", "stop", "set_speed N"});
}

}  // namespace

std::optional<Event> parse_trace_line(std::string_view line, std::size_t line_number) {
  if (const auto hash = line.find('#'); hash != std::string_view::npos) {
    const auto comment = line.substr(hash);
    if (comment.starts_with("# sisv trace ") && comment != kTraceHeader) {
      throw ParseError("unsupported trace format version", line_number);
    }
    line = line.substr(0, hash);
  }
  const auto w = split_words(line);
  if (w.empty()) return std::nullopt;

  const auto head = w[0];
  if (head == "tock" || head == "clear") {
    if (w.size() != 1) {
      throw ParseError("unexpected token '" + std::string(w[1]) + "'", line_number);
    }
    return head == "tock" ? Event::tock() : Event::clear();
  }
  if (head == "detection") {
    if (w.size() != 3) {
      throw ParseError("detection takes a classification and a zone", line_number);
    }
    const auto human = parse_classification(w[1]);
    if (!human) {
      throw ParseError("unknown classification '" + std::string(w[1]) + "'",
                       line_number, 0, {"trained", "untrained"});
    }
    const auto zone = parse_zone(w[2]);
    if (!zone) {
      throw ParseError("unknown zone '" + std::string(w[2]) + "'", line_number, 0,
                       {"green", "yellow", "red"});
    }
    return Event::detection(*human, *zone);
  }
  if (head == "action") return Event::action(parse_action(w, line_number));
  throw ParseError("unknown record '" + std::string(head) + "'", line_number, 0,
                   {"tock", "detection", "action", "clear"});
}

TraceFile parse_trace(std::string_view text) {
  TraceFile out;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_number;
    if (auto e = parse_trace_line(text.substr(pos, end - pos), line_number)) {
      out.events.push_back(*e);
      out.lines.push_back(line_number);
    }
    pos = end + 1;
  }
  return out;
}

TraceFile read_trace_file(const std::string& path) {
  return parse_trace(read_text_file(path));
}

std::string format_trace(const TimedTrace& trace) {
  std::string out(kTraceHeader);
  out += '\n';
  for (const auto& e : trace) {
    out += to_string(e);
    out += '\n';
  }
  return out;
}

std::string slurp(std::istream& in) {
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return slurp(in);
}

}  // namespace sisv
