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

#include "sisv/controller.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>

#include "sisv/errors.hpp"
#include "sisv/kv_file.hpp"

namespace sisv {

namespace {

// Guards of the three response machines. They are written against the
// detection fields directly rather than derived from the requirement table,
// so refinement against the compiled requirements is a real check.

bool hazardous(const Detection& d) {
  return d.zone == Zone::Red ||
         (d.zone == Zone::Yellow && d.human == Classification::Untrained);
}

std::optional<Action> uvc_machine(const Detection& d) {
  if (hazardous(d)) return Action::turn_uvc(false);
  return std::nullopt;
}

std::optional<Action> speed_machine(const Detection& d, int slow_speed) {
  if (hazardous(d)) return Action::stop_robot();
  const bool untrained_green =
      d.zone == Zone::Green && d.human == Classification::Untrained;
  const bool trained_yellow =
      d.zone == Zone::Yellow && d.human == Classification::Trained;
  if (untrained_green || trained_yellow) return Action::set_speed(slow_speed);
  return std::nullopt;
}

std::optional<Action> sound_machine(const Detection& d) {
  if (d.zone == Zone::Green ||
      (d.zone == Zone::Yellow && d.human == Classification::Trained)) {
    return Action::activate_alert(true);
  }
  return std::nullopt;
}

std::string kind_word(ActionKind k) {
  switch (k) {
    case ActionKind::ActivateAlert: return "alert";
    case ActionKind::TurnUvc: return "uvc";
    case ActionKind::StopRobot: return "stop";
    case ActionKind::SetSpeed: return "slow";
  }
  return "?";
}

void apply(ControllerState& s, const Action& a, const ControllerConfig& cfg) {
  switch (a.kind()) {
    case ActionKind::ActivateAlert:
      s.alert = a.on() ? AlertMode::Alerting : AlertMode::Silent;
      break;
    case ActionKind::TurnUvc:
      s.uvc = a.on() ? UvcMode::On : UvcMode::Off;
      break;
    case ActionKind::StopRobot:
      s.motion = MotionMode::Stopped;
      break;
    case ActionKind::SetSpeed:
      // A lower setpoint does not release a halt; only Clear does.
      if (a.speed() >= cfg.nominal_speed) {
        s.motion = MotionMode::Nominal;
      } else if (s.motion != MotionMode::Stopped) {
        s.motion = MotionMode::Slowed;
      }
      break;
  }
}

void queue(std::vector<Obligation>& pending, const Action& a, int ticks) {
  auto it = std::lower_bound(pending.begin(), pending.end(), a,
                             [](const Obligation& o, const Action& x) { return o.action < x; });
  if (it != pending.end() && it->action == a) {
    it->ticks_remaining = std::min(it->ticks_remaining, ticks);
  } else {
    pending.insert(it, Obligation{a, ticks});
  }
}

StepResult emit(ControllerState s, std::vector<Action> actions,
                const ControllerConfig& cfg) {
  for (const auto& a : actions) apply(s, a, cfg);
  return {std::move(s), std::move(actions)};
}

}  // namespace

std::string Mutation::name() const {
  if (row == "R5" && dropped == ActionKind::StopRobot) return "drop-stop-red";
  std::string r = row;
  std::transform(r.begin(), r.end(), r.begin(), [](unsigned char c) { return std::tolower(c); });
  return "drop-" + kind_word(dropped) + "-" + r;
}

std::vector<Mutation> standard_mutations() {
  return {
      {"R1", ActionKind::ActivateAlert},
      {"R2", ActionKind::SetSpeed},
      {"R3", ActionKind::SetSpeed},
      {"R4", ActionKind::StopRobot},
      {"R5", ActionKind::StopRobot},
  };
}

Mutation parse_mutation(const std::string& name) {
  if (name == "drop-stop-r5") return {"R5", ActionKind::StopRobot};
  for (const auto& m : standard_mutations()) {
    if (m.name() == name) return m;
  }
  for (const auto& row : {"R1", "R2", "R3", "R4", "R5"}) {
    for (auto kind : {ActionKind::ActivateAlert, ActionKind::TurnUvc,
                      ActionKind::StopRobot, ActionKind::SetSpeed}) {
      Mutation m{row, kind};
      if (m.name() == name) return m;
    }
  }
  throw ConfigError("unknown mutation '" + name + "'");
}

void ControllerConfig::validate() const {
  if (nominal_speed < 0 || slow_speed < 0) {
    throw ConfigError("speeds must be nonnegative");
  }
  if (slow_speed >= nominal_speed) {
    throw ConfigError("slow_speed (" + std::to_string(slow_speed) +
                      ") must be below nominal_speed (" + std::to_string(nominal_speed) + ")");
  }
  if (deadline_budget < 1) {
    throw ConfigError("deadline_budget must be at least 1 tick");
  }
  if (policy.latency < 0 || policy.latency > deadline_budget + 1) {
    throw ConfigError("discharge latency must lie in [0, deadline_budget + 1]");
  }
  if (mutation) {
    const auto reqs = default_requirements();
    const bool known = std::any_of(reqs.begin(), reqs.end(),
                                   [&](const Requirement& r) { return r.id == mutation->row; });
    if (!known) throw ConfigError("mutation names unknown row '" + mutation->row + "'");
  }
}

ControllerConfig parse_controller_config(std::string_view text) {
  const auto kv = KvFile::parse(text, "controller");
  kv.reject_unknown({"nominal_speed", "slow_speed", "deadline_budget",
                     "discharge_latency", "nondeterministic_discharge"});
  ControllerConfig cfg;
  cfg.nominal_speed = kv.get_int("nominal_speed", cfg.nominal_speed);
  cfg.slow_speed = kv.get_int("slow_speed", cfg.slow_speed);
  cfg.deadline_budget = kv.get_int("deadline_budget", cfg.deadline_budget);
  cfg.policy.latency = kv.get_int("discharge_latency", cfg.policy.latency);
  cfg.policy.nondeterministic = kv.get_int("nondeterministic_discharge", 0) != 0;
  cfg.validate();
  return cfg;
}

ControllerState init(const ControllerConfig& cfg) {
  cfg.validate();
  return ControllerState{};
}

ActionSet dispatch(const Detection& d, const ControllerConfig& cfg) {
  ActionSet out;
  for (const auto& a : {uvc_machine(d), speed_machine(d, cfg.slow_speed), sound_machine(d)}) {
    if (a) out.insert(*a);
  }
  if (cfg.mutation) {
    for (const auto& r : default_requirements(cfg.slow_speed)) {
      if (r.id == cfg.mutation->row && r.trigger.matches(d)) {
        std::erase_if(out, [&](const Action& a) { return a.kind() == cfg.mutation->dropped; });
      }
    }
  }
  return out;
}

ActionSet action_vocabulary(const ControllerConfig& cfg) {
  ActionSet out;
  for (const auto& d : kAllDetections) out.merge(dispatch(d, cfg));
  out.insert(Action::activate_alert(false));
  out.insert(Action::turn_uvc(true));
  out.insert(Action::set_speed(cfg.nominal_speed));
  return out;
}

std::vector<StepResult> step_alternatives(const ControllerState& s, const Event& e,
                                          const ControllerConfig& cfg) {
  if (e.is_action()) {
    throw DomainError("action calls are controller outputs, not inputs: " + to_string(e));
  }
  std::vector<StepResult> out;

  if (e.is_clear()) {
    std::vector<Action> restore;
    if (s.alert == AlertMode::Alerting) restore.push_back(Action::activate_alert(false));
    if (s.uvc == UvcMode::Off) restore.push_back(Action::turn_uvc(true));
    if (s.motion != MotionMode::Nominal) restore.push_back(Action::set_speed(cfg.nominal_speed));
    out.push_back(emit(ControllerState{}, std::move(restore), cfg));
    return out;
  }

  if (e.is_detection()) {
    const auto actions = dispatch(e.detection(), cfg);
    if (cfg.policy.latency == 0) {
      out.push_back(emit(s, {actions.begin(), actions.end()}, cfg));
      if (!cfg.policy.nondeterministic || actions.empty()) return out;
    }
    ControllerState queued = s;
    for (const auto& a : actions) queue(queued.pending, a, cfg.deadline_budget);
    out.push_back({std::move(queued), {}});
    return out;
  }

  // Tock
  ControllerState next = s;
  for (auto& o : next.pending) --o.ticks_remaining;
  std::vector<Action> due;
  std::vector<Obligation> waiting;
  bool deferrable = true;
  for (const auto& o : next.pending) {
    if (cfg.deadline_budget - o.ticks_remaining >= cfg.policy.latency) {
      due.push_back(o.action);
      deferrable = deferrable && o.ticks_remaining >= 1;
    } else {
      waiting.push_back(o);
    }
  }
  ControllerState eager = next;
  eager.pending = std::move(waiting);
  out.push_back(emit(std::move(eager), std::move(due), cfg));
  if (cfg.policy.nondeterministic && !out.front().emitted.empty() && deferrable) {
    out.push_back({std::move(next), {}});
  }
  return out;
}

StepResult step(const ControllerState& s, const Event& e, const ControllerConfig& cfg) {
  return step_alternatives(s, e, cfg).front();
}

namespace {

struct Node {
  ControllerState ctrl;
  std::vector<Action> outbox;
  bool input_ready = true;
  int idle = 0;

  auto operator<=>(const Node&) const = default;
};

std::string describe(const Node& n) {
  std::string out = to_string(n.ctrl);
  if (!n.outbox.empty()) {
    out += " out[";
    for (std::size_t i = 0; i < n.outbox.size(); ++i) {
      if (i > 0) out += ',';
      out += to_string(n.outbox[i]);
    }
    out += ']';
  }
  out += n.input_ready ? " ready" : " wait";
  out += " idle=" + std::to_string(n.idle);
  return out;
}

}  // namespace

Lts build_lts(const ControllerConfig& cfg, int max_idle_tocks, std::size_t state_budget) {
  cfg.validate();
  if (max_idle_tocks < cfg.deadline_budget) {
    throw ConfigError("max idle tocks (" + std::to_string(max_idle_tocks) +
                      ") must be at least the deadline budget (" +
                      std::to_string(cfg.deadline_budget) + ")");
  }

  Lts lts;
  std::map<Node, int> index;
  std::deque<Node> frontier;
  auto intern = [&](Node n) {
    auto it = index.find(n);
    if (it != index.end()) return it->second;
    if (index.size() >= state_budget) {
      throw ResourceError("controller state budget exceeded", index.size());
    }
    const int id = lts.add_state(describe(n));
    index.emplace(n, id);
    frontier.push_back(std::move(n));
    return id;
  };
  lts.set_initial(intern(Node{init(cfg), {}, true, 0}));

  while (!frontier.empty()) {
    const Node n = std::move(frontier.front());
    frontier.pop_front();
    const int src = index.at(n);

    if (!n.outbox.empty()) {
      Node next = n;
      next.outbox.erase(next.outbox.begin());
      lts.add_transition(src, Event::action(n.outbox.front()), intern(std::move(next)));
      continue;
    }

    for (auto& r : step_alternatives(n.ctrl, Event::tock(), cfg)) {
      Node next{std::move(r.state), std::move(r.emitted), true,
                std::min(n.idle + 1, max_idle_tocks)};
      lts.add_transition(src, Event::tock(), intern(std::move(next)));
    }
    if (!n.input_ready) continue;
    for (const auto& d : kAllDetections) {
      const auto e = Event::detection(d);
      for (auto& r : step_alternatives(n.ctrl, e, cfg)) {
        lts.add_transition(src, e, intern(Node{std::move(r.state), std::move(r.emitted), false, 0}));
      }
    }
    if (!n.ctrl.at_rest()) {
      auto r = step(n.ctrl, Event::clear(), cfg);
      lts.add_transition(src, Event::clear(),
                         intern(Node{std::move(r.state), std::move(r.emitted), false, 0}));
    }
  }
  return lts;
}

std::string to_string(const ControllerState& s) {
  std::string out = s.uvc == UvcMode::On ? "uvc:on" : "uvc:off";
  switch (s.motion) {
    case MotionMode::Nominal: out += " motion:nominal"; break;
    case MotionMode::Slowed: out += " motion:slowed"; break;
    case MotionMode::Stopped: out += " motion:stopped"; break;
  }
  out += s.alert == AlertMode::Alerting ? " alert:on" : " alert:off";
  if (!s.pending.empty()) {
    out += " pending[";
    for (std::size_t i = 0; i < s.pending.size(); ++i) {
      if (i > 0) out += ',';
      out += to_string(s.pending[i].action) + "@" + std::to_string(s.pending[i].ticks_remaining);
    }
    out += ']';
  }
  return out;
}

}  // namespace sisv
