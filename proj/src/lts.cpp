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

#include "sisv/lts.hpp"

#include <algorithm>
#include <stdexcept>

namespace sisv {

int Lts::add_state(std::string label) {
  out_.emplace_back();
  labels_.push_back(std::move(label));
  return static_cast<int>(out_.size() - 1);
}

void Lts::add_transition(int source, const Event& event, int target) {
  const auto n = static_cast<int>(out_.size());
  if (source < 0 || source >= n || target < 0 || target >= n) {
    throw std::out_of_range("transition endpoint out of range");
  }
  auto& edges = out_[source];
  const Edge edge{event, target};
  const auto it = std::lower_bound(edges.begin(), edges.end(), edge);
  if (it == edges.end() || *it != edge) edges.insert(it, edge);
}

void Lts::set_initial(int state) {
  if (state < 0 || state >= static_cast<int>(out_.size())) {
    throw std::out_of_range("initial state out of range");
  }
  initial_ = state;
}

std::size_t Lts::num_transitions() const {
  std::size_t n = 0;
  for (const auto& edges : out_) n += edges.size();
  return n;
}

std::set<Event> Lts::alphabet() const {
  std::set<Event> out;
  for (const auto& edges : out_) {
    for (const auto& e : edges) out.insert(e.event);
  }
  return out;
}

std::string Lts::edge_list() const {
  std::string out;
  for (std::size_t s = 0; s < out_.size(); ++s) {
    for (const auto& e : out_[s]) {
      out += std::to_string(s) + ' ' + to_string(e.event) + ' ' +
             std::to_string(e.target) + '\n';
    }
  }
  return out;
}

}  // namespace sisv
