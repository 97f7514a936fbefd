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

#include "sisv/refinement.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <unordered_map>

#include "sisv/errors.hpp"

namespace sisv {

namespace {

// Breadth-first search tree over implementation states; parents give the
// first-discovered (shortest, then lexicographically least) path.
struct SearchTree {
  std::vector<int> order;
  std::vector<int> parent;
  std::vector<std::optional<Event>> via;

  TimedTrace path_to(int state) const {
    TimedTrace out;
    for (int s = state; parent[s] >= 0; s = parent[s]) out.push_back(*via[s]);
    std::reverse(out.begin(), out.end());
    return out;
  }
};

SearchTree explore(const Lts& impl) {
  SearchTree t;
  const auto n = impl.num_states();
  t.parent.assign(n, -1);
  t.via.assign(n, std::nullopt);
  std::vector<bool> seen(n, false);
  std::deque<int> queue = {impl.initial()};
  seen[impl.initial()] = true;
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    t.order.push_back(s);
    for (const auto& e : impl.successors(s)) {
      if (seen[e.target]) continue;
      seen[e.target] = true;
      t.parent[e.target] = s;
      t.via[e.target] = e.event;
      queue.push_back(e.target);
    }
  }
  return t;
}

}  // namespace

TimedTrace Fail::full_trace() const {
  TimedTrace out = counterexample;
  out.push_back(failing_event);
  return out;
}

Verdict check_traces_refinement(const Lts& impl, const SpecAutomaton& spec) {
  const auto reach = explore(impl);
  std::set<Event> unknown;
  for (int s : reach.order) {
    for (const auto& e : impl.successors(s)) {
      if (!spec.in_alphabet(e.event)) unknown.insert(e.event);
    }
  }
  if (!unknown.empty()) {
    std::vector<std::string> names;
    for (const auto& e : unknown) names.push_back(to_string(e));
    throw AlphabetError("implementation events missing from the specification alphabet",
                        std::move(names));
  }

  struct Node {
    int impl;
    int spec;
    int parent;
    std::optional<Event> via;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::uint64_t, int> seen;
  const auto spec_states = static_cast<std::uint64_t>(spec.num_states());
  auto key = [&](int i, int s) { return static_cast<std::uint64_t>(i) * spec_states + s; };

  nodes.push_back({impl.initial(), spec.initial(), -1, std::nullopt});
  seen.emplace(key(impl.initial(), spec.initial()), 0);
  std::size_t transitions = 0;

  for (std::size_t head = 0; head < nodes.size(); ++head) {
    const int i = nodes[head].impl;
    const int s = nodes[head].spec;
    for (const auto& edge : impl.successors(i)) {
      ++transitions;
      const int ns = spec.next(s, edge.event);
      if (ns == SpecAutomaton::kRefused) {
        Fail f;
        for (int n = static_cast<int>(head); nodes[n].parent >= 0; n = nodes[n].parent) {
          f.counterexample.push_back(*nodes[n].via);
        }
        std::reverse(f.counterexample.begin(), f.counterexample.end());
        f.failing_event = edge.event;
        f.reason = "specification refuses " + to_string(edge.event) + " in state " +
                   spec.describe(s);
        f.state = i;
        return f;
      }
      if (seen.try_emplace(key(edge.target, ns), static_cast<int>(nodes.size())).second) {
        nodes.push_back({edge.target, ns, static_cast<int>(head), edge.event});
      }
    }
  }
  return Pass{nodes.size(), transitions};
}

Verdict check_deadlock_freedom(const Lts& impl) {
  const auto reach = explore(impl);
  const auto n = impl.num_states();

  // States that can reach a Tock through other events only.
  std::vector<std::vector<int>> untimed_pred(n);
  std::vector<bool> tock_reachable(n, false);
  std::deque<int> queue;
  std::size_t transitions = 0;
  for (int s : reach.order) {
    for (const auto& e : impl.successors(s)) {
      ++transitions;
      if (e.event.is_tock()) {
        if (!tock_reachable[s]) {
          tock_reachable[s] = true;
          queue.push_back(s);
        }
      } else {
        untimed_pred[e.target].push_back(s);
      }
    }
  }
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    for (int p : untimed_pred[s]) {
      if (!tock_reachable[p]) {
        tock_reachable[p] = true;
        queue.push_back(p);
      }
    }
  }

  for (int s : reach.order) {
    if (impl.successors(s).empty() || !tock_reachable[s]) {
      Fail f;
      f.counterexample = reach.path_to(s);
      f.state = s;
      f.reason = impl.successors(s).empty()
                     ? "deadlock: state " + std::to_string(s) + " has no successor"
                     : "timelock: no tock reachable from state " + std::to_string(s);
      return f;
    }
  }
  return Pass{reach.order.size(), transitions};
}

Verdict check_determinism(const Lts& impl) {
  const auto reach = explore(impl);
  std::size_t transitions = 0;
  for (int s : reach.order) {
    const auto edges = impl.successors(s);
    transitions += edges.size();
    for (std::size_t k = 1; k < edges.size(); ++k) {
      if (edges[k].event == edges[k - 1].event) {
        Fail f;
        f.counterexample = reach.path_to(s);
        f.failing_event = edges[k].event;
        f.state = s;
        f.successors = {edges[k - 1].target, edges[k].target};
        f.reason = "state " + std::to_string(s) + " has two successors on " +
                   to_string(edges[k].event) + ": " + std::to_string(edges[k - 1].target) +
                   " and " + std::to_string(edges[k].target);
        return f;
      }
    }
  }
  return Pass{reach.order.size(), transitions};
}

std::set<TimedTrace> enumerate_traces(const Lts& impl, std::size_t depth, std::size_t budget) {
  std::set<TimedTrace> out;
  TimedTrace current;
  auto visit = [&](auto&& self, int state) -> void {
    if (out.insert(current).second && out.size() > budget) {
      throw ResourceError("trace enumeration budget exceeded", out.size());
    }
    if (current.size() == depth) return;
    for (const auto& e : impl.successors(state)) {
      current.push_back(e.event);
      self(self, e.target);
      current.pop_back();
    }
  };
  visit(visit, impl.initial());
  return out;
}

}  // namespace sisv
