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

#include "sisv/rv.hpp"

#include <algorithm>

namespace sisv {

Monitor synthesize_monitor(const Requirement& r) {
  Monitor m;
  m.requirement = r;
  return m;
}

std::vector<Monitor> synthesize_monitors(const std::vector<Requirement>& reqs) {
  std::vector<Monitor> out;
  out.reserve(reqs.size());
  for (const auto& r : reqs) out.push_back(synthesize_monitor(r));
  return out;
}

MonitorOutput monitor_step(Monitor& m, const Event& e) {
  const std::size_t index = m.events_seen++;
  MonitorOutput out;

  if (e.is_clear()) {
    m.open.clear();
  } else if (e.is_detection()) {
    if (m.requirement.trigger.matches(e.detection())) {
      m.open.push_back({m.requirement.responses, m.requirement.deadline});
    }
  } else if (e.is_action()) {
    std::vector<MonitorObligation> kept;
    for (auto& o : m.open) {
      if (o.remaining.erase(e.action()) > 0 && o.remaining.empty()) {
        if (o.ticks_remaining == 0) ++m.near_misses;
        continue;
      }
      kept.push_back(std::move(o));
    }
    m.open = std::move(kept);
  } else {
    // Tock: expired obligations violate, obligations now at zero warn.
    std::vector<MonitorObligation> kept;
    ActionSet expired;
    ActionSet due;
    for (auto& o : m.open) {
      if (o.ticks_remaining == 0) {
        expired.insert(o.remaining.begin(), o.remaining.end());
        continue;
      }
      --o.ticks_remaining;
      if (o.ticks_remaining == 0) due.insert(o.remaining.begin(), o.remaining.end());
      kept.push_back(std::move(o));
    }
    m.open = std::move(kept);
    if (!expired.empty()) {
      if (!m.verdict) m.verdict = Violation{index, m.requirement.id};
      out.kind = TriggerKind::Violation;
      out.triggers = std::move(expired);
    } else if (!due.empty()) {
      out.kind = TriggerKind::Imminent;
      out.triggers = std::move(due);
    }
  }
  std::sort(m.open.begin(), m.open.end());
  out.verdict = m.verdict;
  return out;
}

bool OfflineReport::all_clean() const {
  return std::all_of(outcomes.begin(), outcomes.end(),
                     [](const RequirementOutcome& o) { return !o.violation; });
}

std::optional<Violation> OfflineReport::first_violation() const {
  std::optional<Violation> best;
  for (const auto& o : outcomes) {
    if (o.violation && (!best || o.violation->event_index < best->event_index)) {
      best = o.violation;
    }
  }
  return best;
}

MonitorBank::MonitorBank(std::vector<Monitor> monitors) : monitors_(std::move(monitors)) {}

void MonitorBank::feed(const Event& e) {
  for (auto& m : monitors_) {
    auto out = monitor_step(m, e);
    if (out.kind != TriggerKind::None) {
      triggers_.push_back({events_, m.requirement.id, out.kind, std::move(out.triggers)});
    }
  }
  ++events_;
}

void MonitorBank::feed(const TimedTrace& chunk) {
  for (const auto& e : chunk) feed(e);
}

OfflineReport MonitorBank::report() const {
  OfflineReport r;
  r.events = events_;
  r.triggers = triggers_;
  for (const auto& m : monitors_) {
    r.outcomes.push_back({m.requirement.id, m.verdict, m.near_misses});
  }
  return r;
}

OfflineReport run_offline(std::vector<Monitor> monitors, const TimedTrace& trace) {
  MonitorBank bank(std::move(monitors));
  bank.feed(trace);
  return bank.report();
}

std::string to_string(TriggerKind kind) {
  switch (kind) {
    case TriggerKind::None: return "none";
    case TriggerKind::Imminent: return "imminent";
    case TriggerKind::Violation: return "violation";
  }
  return "?";
}

}  // namespace sisv
