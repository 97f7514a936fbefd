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

#ifndef SISV_LTS_HPP_
#define SISV_LTS_HPP_

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sisv/domain.hpp"

namespace sisv {

struct Edge {
  Event event;
  int target;

  auto operator<=>(const Edge&) const = default;
};

/**
 * Explicit labelled transition system. Successor lists are kept sorted by
 * (event, target) so that every exploration over an Lts is deterministic.
 */
class Lts {
 public:
  int add_state(std::string label = {});
  /// Throws std::out_of_range when either endpoint is not a state.
  void add_transition(int source, const Event& event, int target);
  void set_initial(int state);

  int initial() const { return initial_; }
  std::size_t num_states() const { return out_.size(); }
  std::size_t num_transitions() const;
  std::span<const Edge> successors(int state) const { return out_.at(state); }
  const std::string& label(int state) const { return labels_.at(state); }

  /// Every event labelling some transition.
  std::set<Event> alphabet() const;
  /// One `source event target` line per transition, states in index order.
  std::string edge_list() const;

 private:
  std::vector<std::vector<Edge>> out_;
  std::vector<std::string> labels_;
  int initial_ = 0;
};

}  // namespace sisv

#endif  // SISV_LTS_HPP_
