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

#ifndef SISV_REFINEMENT_HPP_
#define SISV_REFINEMENT_HPP_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "sisv/domain.hpp"
#include "sisv/lts.hpp"
#include "sisv/spec_automaton.hpp"

namespace sisv {

struct Pass {
  std::size_t states_explored = 0;
  std::size_t transitions = 0;
};

struct Fail {
  /// Implementation trace leading to the offending state.
  TimedTrace counterexample;
  /// The event the check fails on: the one the specification refuses, the
  /// nondeterministic event, or Tock for deadlock and timelock.
  Event failing_event = Event::tock();
  std::string reason;
  /// Offending implementation state and, for nondeterminism, its successors.
  std::optional<int> state;
  std::vector<int> successors;

  TimedTrace full_trace() const;
};

class Verdict {
 public:
  Verdict(Pass p) : result_(p) {}
  Verdict(Fail f) : result_(std::move(f)) {}

  bool passed() const { return std::holds_alternative<Pass>(result_); }
  const Pass& pass() const { return std::get<Pass>(result_); }
  const Fail& failure() const { return std::get<Fail>(result_); }

 private:
  std::variant<Pass, Fail> result_;
};

/**
 * Traces refinement of `impl` by `spec`, by breadth-first exploration of the
 * product. On failure the counterexample is a shortest one, and the
 * lexicographically smallest among those (events ordered as in Event).
 * Throws AlphabetError listing implementation events missing from the alphabet of `spec`.
 */
Verdict check_traces_refinement(const Lts& impl, const SpecAutomaton& spec);

/**
 * Every reachable state has a successor, and from every reachable state a
 * Tock can happen after finitely many other events (no timelock).
 */
Verdict check_deadlock_freedom(const Lts& impl);

/// At most one successor per (reachable state, event).
Verdict check_determinism(const Lts& impl);

/**
 * All traces of `impl` of length at most `depth`, including the empty one.
 * Throws ResourceError once more than `budget` traces are collected.
 */
std::set<TimedTrace> enumerate_traces(const Lts& impl, std::size_t depth,
                                      std::size_t budget = 5'000'000);

}  // namespace sisv

#endif  // SISV_REFINEMENT_HPP_
