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

#include "sisv/domain.hpp"

#include "sisv/errors.hpp"

namespace sisv {

Action Action::set_speed(int value) {
  if (value < 0) {
    throw DomainError("set_speed value must be nonnegative, got " +
                      std::to_string(value));
  }
  return {ActionKind::SetSpeed, value};
}

bool detections_separated(const TimedTrace& trace) {
  bool tock_since_input = true;
  for (const auto& e : trace) {
    if (e.is_tock()) {
      tock_since_input = true;
    } else if (e.is_detection()) {
      if (!tock_since_input) return false;
      tock_since_input = false;
    }
  }
  return true;
}

ActionSet required_actions(const Detection& d, int slow_speed) {
  const auto alert = Action::activate_alert(true);
  const auto slow = Action::set_speed(slow_speed);
  const auto uvc_off = Action::turn_uvc(false);
  const auto stop = Action::stop_robot();
  const bool trained = d.human == Classification::Trained;
  switch (d.zone) {
    case Zone::Green:
      if (trained) return {alert};
      return {alert, slow};
    case Zone::Yellow:
      if (trained) return {alert, slow};
      return {uvc_off, stop};
    case Zone::Red:
      return {uvc_off, stop};
  }
  return {};
}

std::vector<Requirement> default_requirements(int slow_speed) {
  const auto alert = Action::activate_alert(true);
  const auto slow = Action::set_speed(slow_speed);
  const auto uvc_off = Action::turn_uvc(false);
  const auto stop = Action::stop_robot();
  using C = Classification;
  return {
      {"R1", {C::Trained, Zone::Green}, {alert}, kDefaultDeadline},
      {"R2", {C::Untrained, Zone::Green}, {alert, slow}, kDefaultDeadline},
      {"R3", {C::Trained, Zone::Yellow}, {alert, slow}, kDefaultDeadline},
      {"R4", {C::Untrained, Zone::Yellow}, {uvc_off, stop}, kDefaultDeadline},
      {"R5", {std::nullopt, Zone::Red}, {uvc_off, stop}, kDefaultDeadline},
  };
}

int severity_rank(const ActionSet& actions) {
  const auto alert = Action::activate_alert(true);
  if (actions == ActionSet{alert}) return 0;
  if (actions.size() == 2 && actions.contains(alert) &&
      actions.rbegin()->kind() == ActionKind::SetSpeed) {
    return 1;
  }
  if (actions == ActionSet{Action::turn_uvc(false), Action::stop_robot()}) return 2;
  throw DomainError("unranked mitigation set: " + to_string(actions));
}

std::string to_string(Zone z) {
  switch (z) {
    case Zone::Green: return "green";
    case Zone::Yellow: return "yellow";
    case Zone::Red: return "red";
  }
  return "?";
}

std::string to_string(Classification c) {
  return c == Classification::Trained ? "trained" : "untrained";
}

std::string to_string(const Detection& d) {
  return to_string(d.human) + " " + to_string(d.zone);
}

std::string to_string(const Action& a) {
  switch (a.kind()) {
    case ActionKind::ActivateAlert: return a.on() ? "alert_on" : "alert_off";
    case ActionKind::TurnUvc: return a.on() ? "uvc_on" : "uvc_off";
    case ActionKind::StopRobot: return "stop";
    case ActionKind::SetSpeed: return "set_speed " + std::to_string(a.speed());
  }
  return "?";
}

std::string to_string(const Event& e) {
  if (e.is_tock()) return "tock";
  if (e.is_clear()) return "clear";
  if (e.is_detection()) return "detection " + to_string(e.detection());
  return "action " + to_string(e.action());
}

std::string to_string(const Trigger& t) {
  std::string out = "human=";
  out += t.human ? to_string(*t.human) : "any";
  out += ", zone=";
  out += t.zone ? to_string(*t.zone) : "any";
  return out;
}

std::string to_string(const ActionSet& actions) {
  std::string out = "{";
  for (const auto& a : actions) {
    if (out.size() > 1) out += ", ";
    out += to_string(a);
  }
  return out + "}";
}

std::optional<Zone> parse_zone(std::string_view word) {
  if (word == "green") return Zone::Green;
  if (word == "yellow") return Zone::Yellow;
  if (word == "red") return Zone::Red;
  return std::nullopt;
}

std::optional<Classification> parse_classification(std::string_view word) {
  if (word == "trained") return Classification::Trained;
  if (word == "untrained") return Classification::Untrained;
  return std::nullopt;
}

}  // namespace sisv
