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

#ifndef SISV_DOMAIN_HPP_
#define SISV_DOMAIN_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sisv {

/// Proximity zone of a detected human. Declaration order is severity order.
enum class Zone : std::uint8_t { Green, Yellow, Red };

/// Risk order: Trained < Untrained.
enum class Classification : std::uint8_t { Trained, Untrained };

/// A classified perception event.
struct Detection {
  Classification human;
  Zone zone;

  auto operator<=>(const Detection&) const = default;
};

inline constexpr std::array<Detection, 6> kAllDetections = {{
    {Classification::Trained, Zone::Green},
    {Classification::Trained, Zone::Yellow},
    {Classification::Trained, Zone::Red},
    {Classification::Untrained, Zone::Green},
    {Classification::Untrained, Zone::Yellow},
    {Classification::Untrained, Zone::Red},
}};

inline constexpr int kDefaultSlowSpeed = 10;
inline constexpr int kDefaultDeadline = 2;

enum class ActionKind : std::uint8_t { ActivateAlert, TurnUvc, StopRobot, SetSpeed };

/**
 * A mitigation call on the robot platform.
 *
 * The payload is the on/off flag for alert and UVC, the speed for SetSpeed and
 * unused for StopRobot. SetSpeed(0) is a speed command, not a halt.
 */
class Action {
 public:
  static Action activate_alert(bool on) { return {ActionKind::ActivateAlert, on ? 1 : 0}; }
  static Action turn_uvc(bool on) { return {ActionKind::TurnUvc, on ? 1 : 0}; }
  static Action stop_robot() { return {ActionKind::StopRobot, 0}; }
  /// Throws DomainError for negative speeds.
  static Action set_speed(int value);

  ActionKind kind() const { return kind_; }
  bool on() const { return value_ != 0; }
  int speed() const { return value_; }

  auto operator<=>(const Action&) const = default;

 private:
  Action(ActionKind kind, int value) : kind_(kind), value_(value) {}

  ActionKind kind_;
  int value_;
};

using ActionSet = std::set<Action>;

struct Tock {
  auto operator<=>(const Tock&) const = default;
};
struct Clear {
  auto operator<=>(const Clear&) const = default;
};

/**
 * Observable event. Tock is the only time-advancing event; the ordering
 * (Tock < detections < actions < Clear) fixes exploration order everywhere.
 */
class Event {
 public:
  static Event tock() { return Event(Tock{}); }
  static Event detection(Detection d) { return Event(d); }
  static Event detection(Classification c, Zone z) { return Event(Detection{c, z}); }
  static Event action(Action a) { return Event(a); }
  static Event clear() { return Event(Clear{}); }

  bool is_tock() const { return std::holds_alternative<Tock>(value_); }
  bool is_detection() const { return std::holds_alternative<Detection>(value_); }
  bool is_action() const { return std::holds_alternative<Action>(value_); }
  bool is_clear() const { return std::holds_alternative<Clear>(value_); }

  const Detection& detection() const { return std::get<Detection>(value_); }
  const Action& action() const { return std::get<Action>(value_); }

  auto operator<=>(const Event&) const = default;

 private:
  using Value = std::variant<Tock, Detection, Action, Clear>;
  explicit Event(Value v) : value_(std::move(v)) {}

  Value value_;
};

using TimedTrace = std::vector<Event>;

/// True when every two inputs (detections) are separated by at least one Tock.
bool detections_separated(const TimedTrace& trace);

/// Conjunction of an optional classification and an optional zone equality.
struct Trigger {
  std::optional<Classification> human;
  std::optional<Zone> zone;

  bool matches(const Detection& d) const {
    return (!human || *human == d.human) && (!zone || *zone == d.zone);
  }
  auto operator<=>(const Trigger&) const = default;
};

struct Requirement {
  std::string id;
  Trigger trigger;
  ActionSet responses;
  int deadline = kDefaultDeadline;

  bool operator==(const Requirement&) const = default;
};

/// The mitigation row for a detection: total over all six detections.
ActionSet required_actions(const Detection& d, int slow_speed = kDefaultSlowSpeed);

/// R1..R5, one per mitigation row, each with a two-tick deadline.
std::vector<Requirement> default_requirements(int slow_speed = kDefaultSlowSpeed);

/**
 * Escalation level of a mitigation set: 0 alert, 1 alert and slow-down,
 * 2 UVC off and stop. Throws DomainError("unranked mitigation set") otherwise.
 */
int severity_rank(const ActionSet& actions);

std::string to_string(Zone z);
std::string to_string(Classification c);
std::string to_string(const Detection& d);
/// Canonical trace-file spelling, e.g. "set_speed 10" or "uvc_off".
std::string to_string(const Action& a);
/// Canonical trace-file line, e.g. "detection untrained yellow".
std::string to_string(const Event& e);
std::string to_string(const Trigger& t);
std::string to_string(const ActionSet& actions);

std::optional<Zone> parse_zone(std::string_view word);
std::optional<Classification> parse_classification(std::string_view word);

}  // namespace sisv

#endif  // SISV_DOMAIN_HPP_
