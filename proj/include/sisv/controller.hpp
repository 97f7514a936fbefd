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

#ifndef SISV_CONTROLLER_HPP_
#define SISV_CONTROLLER_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sisv/domain.hpp"
#include "sisv/lts.hpp"

namespace sisv {

/**
 * When queued obligations are emitted. An obligation is due once `latency`
 * Tocks have passed since it was queued; latency 0 emits in the detection
 * step itself. With `nondeterministic` set, a due obligation that still has
 * budget left may also be deferred by one Tock (a deliberately
 * nondeterministic variant used to exercise the determinism check).
 */
struct DischargePolicy {
  int latency = 1;
  bool nondeterministic = false;
};

/// Fault injection: the controller forgets one action of one mitigation row.
struct Mutation {
  std::string row;  // "R1".."R5"
  ActionKind dropped;

  /// CLI name, e.g. "drop-stop-red".
  std::string name() const;
};

/// The five single-action mutants, one per mitigation row.
std::vector<Mutation> standard_mutations();
/// Accepts drop-alert-r1, drop-slow-r2, drop-slow-r3, drop-stop-r4,
/// drop-stop-r5 and the alias drop-stop-red; throws ConfigError otherwise.
Mutation parse_mutation(const std::string& name);

struct ControllerConfig {
  int nominal_speed = 100;
  int slow_speed = kDefaultSlowSpeed;
  int deadline_budget = kDefaultDeadline;
  DischargePolicy policy;
  std::optional<Mutation> mutation;

  /// Throws ConfigError when slow_speed >= nominal_speed, deadline_budget < 1,
  /// latency outside [0, deadline_budget + 1] or an unknown mutation row.
  void validate() const;
};

ControllerConfig parse_controller_config(std::string_view text);

enum class UvcMode { On, Off };
enum class MotionMode { Nominal, Slowed, Stopped };
enum class AlertMode { Silent, Alerting };

struct Obligation {
  Action action;
  int ticks_remaining;

  auto operator<=>(const Obligation&) const = default;
};

struct ControllerState {
  UvcMode uvc = UvcMode::On;
  MotionMode motion = MotionMode::Nominal;
  AlertMode alert = AlertMode::Silent;
  /// Sorted by action, at most one entry per action.
  std::vector<Obligation> pending;

  bool at_rest() const {
    return uvc == UvcMode::On && motion == MotionMode::Nominal &&
           alert == AlertMode::Silent && pending.empty();
  }
  auto operator<=>(const ControllerState&) const = default;
};

struct StepResult {
  ControllerState state;
  std::vector<Action> emitted;

  auto operator<=>(const StepResult&) const = default;
};

/// Validates `cfg` and returns the treatment-in-progress state.
ControllerState init(const ControllerConfig& cfg);

/// Mitigation set the dispatcher relays for a detection (after any mutation).
ActionSet dispatch(const Detection& d, const ControllerConfig& cfg);

/// Every action the controller can ever emit under `cfg`.
ActionSet action_vocabulary(const ControllerConfig& cfg);

/**
 * All successors the controller may take. Exactly one unless the
 * nondeterministic discharge variant is enabled; the first entry is always
 * the eager choice. Throws DomainError for ActionCall inputs.
 */
std::vector<StepResult> step_alternatives(const ControllerState& s, const Event& e,
                                          const ControllerConfig& cfg);

/// The eager successor: `step_alternatives(s, e, cfg).front()`.
StepResult step(const ControllerState& s, const Event& e, const ControllerConfig& cfg);

/**
 * Reachable graph of the controller composed with its environment.
 *
 * The environment offers detections (and Clear while a mitigation is active)
 * only after at least one Tock since the previous input. Actions emitted by a
 * step are urgent: they are output one by one, in order, before any other
 * event. Each state also carries a count of consecutive Tocks without input,
 * saturating at `max_idle_tocks`.
 *
 * Throws ConfigError when max_idle_tocks < deadline_budget and ResourceError
 * when more than `state_budget` states are reached.
 */
Lts build_lts(const ControllerConfig& cfg, int max_idle_tocks,
              std::size_t state_budget = 1'000'000);

std::string to_string(const ControllerState& s);

}  // namespace sisv

#endif  // SISV_CONTROLLER_HPP_
