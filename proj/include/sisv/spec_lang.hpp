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

#ifndef SISV_SPEC_LANG_HPP_
#define SISV_SPEC_LANG_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "sisv/domain.hpp"

namespace sisv {

inline constexpr std::string_view kRequirementsHeader = "# sisv requirements v1";

/**
 * Parses bounded-response requirements, one sentence per line:
 *
 *   REQ <id> : whenever detection ( human = <classification|any> ,
 *              zone = <zone|any> ) then <action> [ and <action> ]*
 *              within <d> ticks
 *
 * Actions are activate_alert, deactivate_alert, turn_uvc_off, turn_uvc_on,
 * stop_robot and set_speed ( <n> ). `#` starts a comment.
 *
 * Throws ParseError with line, column and the expected-token set on syntax
 * errors, unknown zones, classifications or actions, duplicate ids and empty
 * response lists.
 */
std::vector<Requirement> parse_requirements(std::string_view text);

std::vector<Requirement> read_requirements_file(const std::string& path);

/// Inverse of parse_requirements; output starts with the format header.
std::string format_requirements(const std::vector<Requirement>& reqs);

/// Requirement-language spelling of one action, e.g. "set_speed(10)".
std::string requirement_action_name(const Action& a);

}  // namespace sisv

#endif  // SISV_SPEC_LANG_HPP_
