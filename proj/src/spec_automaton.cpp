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

#include "sisv/spec_automaton.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <iterator>
#include <map>
#include <set>

#include "sisv/errors.hpp"

namespace sisv {

namespace {

struct OpenObligation {
  ActionSet remaining;
  std::uint8_t ticks;

  auto operator<=>(const OpenObligation&) const = default;
};

// Identical obligations are interchangeable, so a set suffices.
using Obligations = std::set<OpenObligation>;

std::string describe(const Obligations& obs) {
  if (obs.empty()) return "{}";
  std::string out;
  for (const auto& o : obs) {
    if (!out.empty()) out += ' ';
    out += to_string(o.remaining) + "@" + std::to_string(o.ticks);
  }
  return out;
}

// Drops every obligation implied by another one: if o demands a superset of
// p's responses with no more ticks left, any continuation meeting o meets p.
// This keeps the language and stops long deadlines from multiplying states.
Obligations prune(Obligations obs) {
  for (auto it = obs.begin(); it != obs.end();) {
    const bool implied = std::any_of(obs.begin(), obs.end(), [&](const OpenObligation& o) {
      return &o != &*it && o.ticks <= it->ticks &&
             std::includes(o.remaining.begin(), o.remaining.end(), it->remaining.begin(),
                           it->remaining.end());
    });
    it = implied ? obs.erase(it) : std::next(it);
  }
  return obs;
}

std::optional<Obligations> successor(const Obligations& obs, const Event& e,
                                     std::span<const Requirement> reqs) {
  if (e.is_clear()) return Obligations{};
  if (e.is_tock()) {
    Obligations out;
    for (const auto& o : obs) {
      if (o.ticks == 0) return std::nullopt;  // remaining is never empty here
      out.insert({o.remaining, static_cast<std::uint8_t>(o.ticks - 1)});
    }
    return out;
  }
  if (e.is_detection()) {
    Obligations out = obs;
    for (const auto& r : reqs) {
      if (r.trigger.matches(e.detection())) {
        out.insert({r.responses, static_cast<std::uint8_t>(r.deadline)});
      }
    }
    return out;
  }
  Obligations out;
  for (auto o : obs) {
    o.remaining.erase(e.action());
    if (!o.remaining.empty()) out.insert(std::move(o));
  }
  return out;
}

void validate(std::span<const Requirement> reqs) {
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const auto& r = reqs[i];
    if (r.deadline < 0 || r.deadline > kMaxDeadline) {
      throw DomainError("deadline of " + r.id + " (" + std::to_string(r.deadline) +
                        ") overflows the clock bound " + std::to_string(kMaxDeadline));
    }
    if (r.responses.empty()) throw ConfigError("requirement " + r.id + " has no responses");
    for (std::size_t j = 0; j < i; ++j) {
      const auto& q = reqs[j];
      if (q.trigger == r.trigger && (q.responses != r.responses || q.deadline != r.deadline)) {
        throw ConfigError("requirements " + q.id + " and " + r.id +
                          " conflict on trigger (" + to_string(r.trigger) + ")");
      }
    }
  }
}

}  // namespace

std::size_t SpecAutomaton::num_transitions() const {
  return static_cast<std::size_t>(
      std::count_if(table_.begin(), table_.end(), [](int t) { return t != kRefused; }));
}

bool SpecAutomaton::in_alphabet(const Event& e) const {
  return std::binary_search(alphabet_.begin(), alphabet_.end(), e);
}

int SpecAutomaton::next(int state, const Event& e) const {
  const auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), e);
  if (it == alphabet_.end() || *it != e) {
    throw AlphabetError("event outside the specification alphabet", {to_string(e)});
  }
  const auto column = static_cast<std::size_t>(it - alphabet_.begin());
  return table_.at(static_cast<std::size_t>(state) * alphabet_.size() + column);
}

SpecAutomaton compile_spec(std::span<const Requirement> reqs, const ActionSet& extra_actions,
                           std::size_t state_budget) {
  validate(reqs);

  std::set<Event> alphabet = {Event::tock(), Event::clear()};
  for (const auto& d : kAllDetections) alphabet.insert(Event::detection(d));
  ActionSet actions = {Action::activate_alert(true), Action::activate_alert(false),
                       Action::turn_uvc(true), Action::turn_uvc(false), Action::stop_robot()};
  actions.insert(extra_actions.begin(), extra_actions.end());
  for (const auto& r : reqs) actions.insert(r.responses.begin(), r.responses.end());
  for (const auto& a : actions) alphabet.insert(Event::action(a));

  SpecAutomaton spec;
  spec.alphabet_.assign(alphabet.begin(), alphabet.end());

  std::map<Obligations, int> index;
  std::vector<const Obligations*> states;
  auto intern = [&](Obligations obs) {
    auto [it, fresh] = index.try_emplace(std::move(obs), static_cast<int>(states.size()));
    if (fresh) {
      if (states.size() >= state_budget) {
        throw ResourceError("specification state budget exceeded", states.size());
      }
      states.push_back(&it->first);
      spec.names_.push_back(describe(it->first));
    }
    return it->second;
  };
  intern({});

  // States are numbered in discovery order, so the table grows row by row.
  for (std::size_t s = 0; s < states.size(); ++s) {
    for (const auto& e : spec.alphabet_) {
      const auto next = successor(*states[s], e, reqs);
      spec.table_.push_back(next ? intern(prune(*next)) : SpecAutomaton::kRefused);
    }
  }
  return spec;
}

bool spec_accepts(const SpecAutomaton& spec, const TimedTrace& trace) {
  int state = spec.initial();
  bool accepted = true;
  for (const auto& e : trace) {
    // Keep walking only to validate the alphabet of the remaining events.
    if (!accepted) {
      if (!spec.in_alphabet(e)) spec.next(0, e);
      continue;
    }
    state = spec.next(state, e);
    if (state == SpecAutomaton::kRefused) accepted = false;
  }
  return accepted;
}

}  // namespace sisv
