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

#include <doctest.h>

#include <fstream>

#include "sisv/errors.hpp"
#include "sisv/trace_io.hpp"

using namespace sisv;

TEST_CASE("trace records parse to events") {
  const auto t = parse_trace(
      "# sisv trace v1\n"
      "# comment\n"
      "\n"
      "detection untrained yellow\n"
      "tock\n"
      "  action uvc_off  \n"
      "action set_speed 10\n"
      "clear\n");
  REQUIRE(t.events.size() == 5);
  CHECK(t.events[0] == Event::detection(Classification::Untrained, Zone::Yellow));
  CHECK(t.events[1] == Event::tock());
  CHECK(t.events[2] == Event::action(Action::turn_uvc(false)));
  CHECK(t.events[3] == Event::action(Action::set_speed(10)));
  CHECK(t.events[4] == Event::clear());
  CHECK(t.lines == std::vector<std::size_t>{4, 5, 6, 7, 8});
}

TEST_CASE("malformed records carry their line number") {
  try {
    parse_trace("tock\ndetection trained blue\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("blue") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_trace("action set_speed -3\n"), ParseError);
  CHECK_THROWS_AS(parse_trace("action set_speed\n"), ParseError);
  CHECK_THROWS_AS(parse_trace("action fly\n"), ParseError);
  CHECK_THROWS_AS(parse_trace("tock tock\n"), ParseError);
  CHECK_THROWS_AS(parse_trace("detection trained\n"), ParseError);
  CHECK_THROWS_AS(parse_trace("# sisv trace v2\ntock\n"), ParseError);
}

TEST_CASE("written traces read back identically") {
  const TimedTrace trace = {Event::detection(Classification::Trained, Zone::Red),
                            Event::tock(),
                            Event::action(Action::turn_uvc(false)),
                            Event::action(Action::stop_robot()),
                            Event::action(Action::set_speed(0)),
                            Event::action(Action::activate_alert(false)),
                            Event::action(Action::turn_uvc(true)),
                            Event::action(Action::activate_alert(true)),
                            Event::clear(),
                            Event::tock()};
  const auto text = format_trace(trace);
  CHECK(text.rfind(std::string(kTraceHeader), 0) == 0);
  CHECK(parse_trace(text).events == trace);
  CHECK(format_trace(parse_trace(text).events) == text);
}

TEST_CASE("every detection and action round-trips through text") {
  for (const auto& d : kAllDetections) {
    const auto e = Event::detection(d);
    CHECK(parse_trace_line(to_string(e), 1) == e);
  }
  for (int s : {0, 1, 10, 100, 65535}) {
    const auto e = Event::action(Action::set_speed(s));
    CHECK(parse_trace_line(to_string(e), 1) == e);
  }
}

TEST_CASE("missing files are configuration errors") {
  CHECK_THROWS_AS(read_trace_file("/nonexistent/x.trace"), ConfigError);
  CHECK_THROWS_AS(read_text_file("/nonexistent/x.req"), ConfigError);
}

TEST_CASE("shipped trace files parse") {
  const auto t = read_trace_file(std::string(SISV_SOURCE_DIR) + "/traces/r4-late.trace");
  CHECK(t.events.size() == 6);
  CHECK(detections_separated(t.events));
}
