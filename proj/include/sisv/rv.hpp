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

#ifndef SISV_RV_HPP_
#define SISV_RV_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sisv/domain.hpp"

namespace sisv {

struct Violation {
  std::size_t event_index;
  std::string requirement_id;
  auto operator<=>(const Violation&) const = default;
};

struct MonitorObligation {
  ActionSet remaining;
  int ticks_remaining;
  auto operator<=>(const MonitorObligation&) const = default;
};

/// Online checker for one bounded-response requirement.
struct Monitor {
  Requirement requirement;
  /// Kept sorted; duplicates allowed.
  std::vector<MonitorObligation> open;
  /// Empty while clean. Once set it never changes.
  std::optional<Violation> verdict;
  std::size_t events_seen = 0;
  std::size_t near_misses = 0;

  bool clean() const { return !verdict.has_value(); }
  bool operator==(const Monitor&) const = default;
};

enum class TriggerKind { None, Imminent, Violation };

struct MonitorOutput {
  std::optional<Violation> verdict;
  /// Unmet actions of obligations that are due now or just expired.
  ActionSet triggers;
  TriggerKind kind = TriggerKind::None;
};

Monitor synthesize_monitor(const Requirement& r);

/// Total; a violated monitor keeps tracking obligations but its verdict stays.
MonitorOutput monitor_step(Monitor& m, const Event& e);

/// One trigger record, as emitted on the monitor output stream.
struct TriggerRecord {
  std::size_t event_index;
  std::string requirement_id;
  TriggerKind kind;
  ActionSet actions;
  auto operator<=>(const TriggerRecord&) const = default;
};

struct RequirementOutcome {
  std::string requirement_id;
  std::optional<Violation> violation;
  std::size_t near_misses = 0;
  bool operator==(const RequirementOutcome&) const = default;
};

struct OfflineReport {
  std::vector<RequirementOutcome> outcomes;
  std::vector<TriggerRecord> triggers;
  std::size_t events = 0;

  bool all_clean() const;
  /// Earliest violation over all requirements (ties: declaration order).
  std::optional<Violation> first_violation() const;
  bool operator==(const OfflineReport&) const = default;
};

/// Streams events into a set of monitors; feeding a trace in pieces gives the
/// same report as feeding it at once.
class MonitorBank {
 public:
  explicit MonitorBank(std::vector<Monitor> monitors);

  void feed(const Event& e);
  void feed(const TimedTrace& chunk);
  OfflineReport report() const;
  const std::vector<Monitor>& monitors() const { return monitors_; }
  const std::vector<TriggerRecord>& triggers() const { return triggers_; }
  std::size_t events() const { return events_; }

 private:
  std::vector<Monitor> monitors_;
  std::vector<TriggerRecord> triggers_;
  std::size_t events_ = 0;
};

OfflineReport run_offline(std::vector<Monitor> monitors, const TimedTrace& trace);

std::vector<Monitor> synthesize_monitors(const std::vector<Requirement>& reqs);

std::string to_string(TriggerKind kind);

}  // namespace sisv

#endif  // SISV_RV_HPP_
