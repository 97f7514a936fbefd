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

#ifndef SISV_SPEC_AUTOMATON_HPP_
#define SISV_SPEC_AUTOMATON_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sisv/domain.hpp"

namespace sisv {

/// Largest deadline the obligation clocks can represent.
inline constexpr int kMaxDeadline = 255;

/**
 * Deterministic safety automaton over timed traces. Every state accepts; a
 * trace is outside the language exactly when some event has no transition.
 *
 * A state is the set of open obligations (unmet responses, ticks left). A
 * matching detection opens an obligation, an action removes itself from every
 * obligation, Clear drops them all, and Tock is refused while any obligation
 * with zero ticks left still has unmet responses.
 */
class SpecAutomaton {
 public:
  static constexpr int kRefused = -1;

  int initial() const { return 0; }
  std::size_t num_states() const { return names_.size(); }
  std::size_t num_transitions() const;
  const std::vector<Event>& alphabet() const { return alphabet_; }
  bool in_alphabet(const Event& e) const;

  /// Successor of `state` on `e`, or kRefused. Throws AlphabetError when `e`
  /// is not in the alphabet.
  int next(int state, const Event& e) const;

  /// Open obligations of a state, e.g. "{alert_on}@1 {stop, uvc_off}@2".
  const std::string& describe(int state) const { return names_.at(state); }

  bool operator==(const SpecAutomaton&) const = default;

 private:
  friend SpecAutomaton compile_spec(std::span<const Requirement>, const ActionSet&,
                                    std::size_t);

  std::vector<Event> alphabet_;  // sorted
  std::vector<int> table_;       // num_states x alphabet, row-major
  std::vector<std::string> names_;
};

/**
 * Compiles requirements into their safety automaton. The action alphabet is
 * every response, the alert/UVC/stop vocabulary and `extra_actions`.
 *
 * Throws DomainError for deadlines outside [0, kMaxDeadline], ConfigError for
 * an empty response set or two requirements with the same trigger but
 * different responses or deadlines, ResourceError past `state_budget`.
 */
SpecAutomaton compile_spec(std::span<const Requirement> reqs,
                           const ActionSet& extra_actions = {},
                           std::size_t state_budget = 200'000);

/// Prefix membership. Throws AlphabetError for events outside the alphabet.
bool spec_accepts(const SpecAutomaton& spec, const TimedTrace& trace);

}  // namespace sisv

#endif  // SISV_SPEC_AUTOMATON_HPP_
