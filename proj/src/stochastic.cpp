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

#include "sisv/stochastic.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "sisv/errors.hpp"
#include "sisv/kv_file.hpp"

namespace sisv {

namespace {

constexpr double kRowTolerance = 1e-12;

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void Scenario::validate() const {
  const std::pair<const char*, double> probs[] = {{"p_intrusion", p_intrusion},
                                                  {"p_detect", p_detect},
                                                  {"p_trained", p_trained},
                                                  {"accuracy_threshold", accuracy_threshold}};
  for (const auto& [name, p] : probs) {
    if (!is_probability(p)) {
      throw ConfigError(std::string(name) + " must lie in [0,1]");
    }
  }
  if (transition_ticks < 1 || treatment_ticks < 1) {
    throw ConfigError("transition_ticks and treatment_ticks must be at least 1");
  }
  if (mitigation_latency < 0) throw ConfigError("mitigation_latency must be nonnegative");
}

Scenario parse_scenario(std::string_view text) {
  const auto kv = KvFile::parse(text, "scenario");
  kv.reject_unknown({"p_intrusion", "p_detect", "p_trained", "transition_ticks",
                     "treatment_ticks", "mitigation_latency", "accuracy_threshold"});
  Scenario sc;
  sc.p_intrusion = kv.get_double("p_intrusion", sc.p_intrusion);
  sc.p_detect = kv.get_double("p_detect", sc.p_detect);
  sc.p_trained = kv.get_double("p_trained", sc.p_trained);
  sc.transition_ticks = kv.get_int("transition_ticks", sc.transition_ticks);
  sc.treatment_ticks = kv.get_int("treatment_ticks", sc.treatment_ticks);
  sc.mitigation_latency = kv.get_int("mitigation_latency", sc.mitigation_latency);
  sc.accuracy_threshold = kv.get_double("accuracy_threshold", sc.accuracy_threshold);
  sc.validate();
  return sc;
}

std::string format_scenario(const Scenario& sc) {
  std::ostringstream os;
  os.precision(17);
  os << kScenarioHeader << '\n'
     << "p_intrusion = " << sc.p_intrusion << '\n'
     << "p_detect = " << sc.p_detect << '\n'
     << "p_trained = " << sc.p_trained << '\n'
     << "transition_ticks = " << sc.transition_ticks << '\n'
     << "treatment_ticks = " << sc.treatment_ticks << '\n'
     << "mitigation_latency = " << sc.mitigation_latency << '\n'
     << "accuracy_threshold = " << sc.accuracy_threshold << '\n';
  return os.str();
}

Dtmc Dtmc::from_rows(const std::vector<std::vector<Entry>>& rows, std::vector<double> initial,
                     std::vector<bool> target, std::vector<std::string> names) {
  const auto n = rows.size();
  if (initial.size() != n || target.size() != n) {
    throw DomainError("initial distribution and target labels must cover every state");
  }
  if (!names.empty() && names.size() != n) throw DomainError("state names must cover every state");
  names.resize(n);

  Dtmc m;
  m.offsets_.push_back(0);
  for (std::size_t s = 0; s < n; ++s) {
    double sum = 0.0;
    for (const auto& e : rows[s]) {
      if (e.target < 0 || static_cast<std::size_t>(e.target) >= n) {
        throw DomainError("transition target out of range in row " + std::to_string(s));
      }
      if (!(e.probability >= 0.0)) {
        throw DomainError("negative transition probability in row " + std::to_string(s));
      }
      sum += e.probability;
      m.entries_.push_back(e);
    }
    if (std::abs(sum - 1.0) > kRowTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "row " << s << " sums to " << sum;
      throw DomainError(os.str());
    }
    m.offsets_.push_back(m.entries_.size());
  }
  double mass = 0.0;
  for (double p : initial) {
    if (!is_probability(p)) throw DomainError("initial probabilities must lie in [0,1]");
    mass += p;
  }
  if (std::abs(mass - 1.0) > kRowTolerance) throw DomainError("initial distribution must sum to 1");
  m.initial_ = std::move(initial);
  m.target_ = std::move(target);
  m.names_ = std::move(names);
  return m;
}

double Dtmc::max_row_error() const {
  double worst = 0.0;
  for (std::size_t s = 0; s < size(); ++s) {
    double sum = 0.0;
    for (const auto& e : row(s)) sum += e.probability;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

std::vector<bool> Dtmc::reachable() const {
  std::vector<bool> seen(size(), false);
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < size(); ++s) {
    if (initial_[s] > 0.0) {
      seen[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const auto s = queue.front();
    queue.pop_front();
    for (const auto& e : row(s)) {
      if (e.probability > 0.0 && !seen[e.target]) {
        seen[e.target] = true;
        queue.push_back(static_cast<std::size_t>(e.target));
      }
    }
  }
  return seen;
}

Dtmc build_dtmc(const Scenario& sc) {
  sc.validate();
  const int cycle = sc.treatment_ticks + sc.transition_ticks;
  const int latency = sc.mitigation_latency;
  // Human sub-state: 0 absent; then per classification one undetected slot
  // followed by `latency` countdown slots.
  const int per_class = 1 + latency;
  const int human_states = 1 + 2 * per_class;
  const int safe = cycle * human_states;
  const auto n = static_cast<std::size_t>(safe + 1);

  auto index = [&](int pos, int human) { return pos * human_states + human; };
  auto present = [&](int cls, int slot) { return 1 + cls * per_class + slot; };
  auto in_transition = [&](int pos) { return pos >= sc.treatment_ticks; };

  std::vector<std::map<int, double>> rows(n);
  std::vector<bool> target(n, false);
  std::vector<std::string> names(n);
  std::vector<double> initial(n, 0.0);

  // Detector outcome for a human of class `cls` present this tick.
  auto detect = [&](std::map<int, double>& row, int pos, int cls, double p) {
    const int detected = latency == 0 ? safe : index(pos, present(cls, latency));
    if (sc.p_detect > 0.0) row[detected] += p * sc.p_detect;
    if (sc.p_detect < 1.0) row[index(pos, present(cls, 0))] += p * (1.0 - sc.p_detect);
  };

  for (int pos = 0; pos < cycle; ++pos) {
    const int next = (pos + 1) % cycle;
    const std::string phase = in_transition(pos) ? "transition" : "treatment";
    const int absent = index(pos, 0);
    names[absent] = "pos=" + std::to_string(pos) + " " + phase + " absent";
    initial[absent] = 1.0 / cycle;
    auto& arow = rows[absent];
    if (sc.p_intrusion < 1.0) arow[index(next, 0)] += 1.0 - sc.p_intrusion;
    if (sc.p_intrusion > 0.0) {
      if (sc.p_trained > 0.0) detect(arow, next, 0, sc.p_intrusion * sc.p_trained);
      if (sc.p_trained < 1.0) detect(arow, next, 1, sc.p_intrusion * (1.0 - sc.p_trained));
    }

    for (int cls = 0; cls < 2; ++cls) {
      const std::string who = cls == 0 ? "trained" : "untrained";
      const int undetected = index(pos, present(cls, 0));
      names[undetected] = "pos=" + std::to_string(pos) + " " + phase + " " + who + " undetected";
      target[undetected] = in_transition(pos);
      detect(rows[undetected], next, cls, 1.0);

      for (int k = 1; k <= latency; ++k) {
        const int pending = index(pos, present(cls, k));
        names[pending] = "pos=" + std::to_string(pos) + " " + phase + " " + who +
                         " mitigating in " + std::to_string(k);
        target[pending] = in_transition(pos);
        rows[pending][k == 1 ? safe : index(next, present(cls, k - 1))] += 1.0;
      }
    }
  }
  names[safe] = "mitigated";
  rows[safe][safe] = 1.0;

  std::vector<std::vector<Dtmc::Entry>> packed(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (const auto& [t, p] : rows[s]) {
      if (p > 0.0) packed[s].push_back({t, p});
    }
  }
  return Dtmc::from_rows(packed, std::move(initial), std::move(target), std::move(names));
}

std::size_t dtmc_size(const Scenario& sc) {
  const auto cycle = static_cast<std::size_t>(sc.treatment_ticks) + sc.transition_ticks;
  return cycle * (1 + 2 * (1 + static_cast<std::size_t>(sc.mitigation_latency))) + 1;
}

double prob_bounded_reach(const Dtmc& m, int k) {
  if (k < 0) throw DomainError("step bound must be nonnegative");
  // Forward propagation; mass entering a target state is banked and removed.
  std::vector<double> dist = m.initial();
  double reached = 0.0;
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (m.is_target(s)) {
      reached += dist[s];
      dist[s] = 0.0;
    }
  }
  std::vector<double> next(m.size());
  for (int step = 0; step < k; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < m.size(); ++s) {
      if (dist[s] == 0.0) continue;
      for (const auto& e : m.row(s)) next[e.target] += dist[s] * e.probability;
    }
    for (std::size_t s = 0; s < m.size(); ++s) {
      if (m.is_target(s)) {
        reached += next[s];
        next[s] = 0.0;
      }
    }
    dist.swap(next);
  }
  return reached;
}

namespace {

// States with a positive-probability path to a target state.
std::vector<bool> can_reach_target(const Dtmc& m) {
  std::vector<std::vector<int>> pred(m.size());
  std::deque<int> queue;
  std::vector<bool> yes(m.size(), false);
  for (std::size_t s = 0; s < m.size(); ++s) {
    for (const auto& e : m.row(s)) {
      if (e.probability > 0.0) pred[e.target].push_back(static_cast<int>(s));
    }
    if (m.is_target(s)) {
      yes[s] = true;
      queue.push_back(static_cast<int>(s));
    }
  }
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    for (int p : pred[s]) {
      if (!yes[p]) {
        yes[p] = true;
        queue.push_back(p);
      }
    }
  }
  return yes;
}

}  // namespace

ReachResult prob_reach(const Dtmc& m, SolveMethod method, double tolerance,
                       std::size_t max_iterations) {
  const auto maybe_reach = can_reach_target(m);
  std::vector<double> x(m.size(), 0.0);
  std::vector<int> unknowns;
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (m.is_target(s)) {
      x[s] = 1.0;
    } else if (maybe_reach[s]) {
      unknowns.push_back(static_cast<int>(s));
    }
  }

  ReachResult result{0.0, 0.0, 0, method};
  if (method == SolveMethod::ValueIteration) {
    std::vector<double> next = x;
    double residual = unknowns.empty() ? 0.0 : 1.0;
    while (residual >= tolerance) {
      if (result.iterations >= max_iterations) {
        throw ResourceError("value iteration did not converge", result.iterations, residual);
      }
      residual = 0.0;
      for (int s : unknowns) {
        double v = 0.0;
        for (const auto& e : m.row(s)) v += e.probability * x[e.target];
        residual = std::max(residual, std::abs(v - x[s]));
        next[s] = v;
      }
      for (int s : unknowns) x[s] = next[s];
      ++result.iterations;
    }
    result.residual = residual;
  } else {
    if (m.size() >= kDirectSolveLimit) {
      throw ConfigError("direct solve is limited to chains below " +
                        std::to_string(kDirectSolveLimit) + " states");
    }
    std::vector<int> column(m.size(), -1);
    for (std::size_t i = 0; i < unknowns.size(); ++i) column[unknowns[i]] = static_cast<int>(i);
    const auto u = static_cast<Eigen::Index>(unknowns.size());
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(u);
    for (Eigen::Index i = 0; i < u; ++i) {
      triplets.emplace_back(i, i, 1.0);
      for (const auto& e : m.row(unknowns[i])) {
        if (m.is_target(e.target)) {
          b[i] += e.probability;
        } else if (column[e.target] >= 0) {
          triplets.emplace_back(i, column[e.target], -e.probability);
        }
      }
    }
    if (u > 0) {
      Eigen::SparseMatrix<double> a(u, u);
      a.setFromTriplets(triplets.begin(), triplets.end());
      a.makeCompressed();
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
      lu.compute(a);
      if (lu.info() != Eigen::Success) throw ResourceError("sparse LU factorization failed", 0);
      const Eigen::VectorXd sol = lu.solve(b);
      result.residual = (a * sol - b).cwiseAbs().maxCoeff();
      for (Eigen::Index i = 0; i < u; ++i) x[unknowns[i]] = sol[i];
    }
    result.iterations = 1;
  }

  for (std::size_t s = 0; s < m.size(); ++s) result.probability += m.initial()[s] * x[s];
  result.probability = std::clamp(result.probability, 0.0, 1.0);
  return result;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Whether one simulated demand leads to exposure within `horizon` ticks.
bool simulate_run(const Scenario& sc, int horizon, std::mt19937_64& rng) {
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const int cycle = sc.treatment_ticks + sc.transition_ticks;
  int pos = std::min(static_cast<int>(uniform() * cycle), cycle - 1);
  bool present = false;
  bool detected = false;
  int countdown = 0;

  auto try_detect = [&] {
    if (uniform() < sc.p_detect) {
      detected = true;
      countdown = sc.mitigation_latency;
    }
  };

  for (int t = 1; t <= horizon; ++t) {
    pos = (pos + 1) % cycle;
    if (!present) {
      if (uniform() < sc.p_intrusion) {
        present = true;
        (void)(uniform() < sc.p_trained);  // classification; R5 covers both
        try_detect();
      }
    } else if (!detected) {
      try_detect();
    } else {
      --countdown;
    }
    if (detected && countdown == 0) return false;  // lamp off, demand handled
    if (present && pos >= sc.treatment_ticks) return true;
  }
  return false;
}

}  // namespace

McEstimate monte_carlo(const Scenario& sc, std::size_t runs, int horizon, std::uint64_t seed,
                       unsigned jobs) {
  sc.validate();
  if (runs == 0) throw DomainError("monte carlo needs at least one run");
  if (horizon < 0) throw DomainError("horizon must be nonnegative");
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::min<std::size_t>(runs, 256))));

  std::vector<std::size_t> hits(jobs, 0);
  auto work = [&](unsigned job) {
    const std::size_t begin = runs * job / jobs;
    const std::size_t end = runs * (job + 1) / jobs;
    std::size_t local = 0;
    for (std::size_t r = begin; r < end; ++r) {
      std::mt19937_64 rng(splitmix64(seed ^ splitmix64(r)));
      if (simulate_run(sc, horizon, rng)) ++local;
    }
    hits[job] = local;
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work, j);
  }

  McEstimate out{};
  out.runs = runs;
  for (auto h : hits) out.hits += h;
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(runs);
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(runs));
  return out;
}

SilLevel pfd_to_sil(double pfd, const SilBands& bands) {
  if (!is_probability(pfd)) throw DomainError("pfd must lie in [0,1]");
  if (pfd >= bands.edges[0]) return SilLevel::BelowSIL1;
  if (pfd >= bands.edges[1]) return SilLevel::SIL1;
  if (pfd >= bands.edges[2]) return SilLevel::SIL2;
  if (pfd >= bands.edges[3]) return SilLevel::SIL3;
  return SilLevel::SIL4;
}

std::string to_string(SilLevel level) {
  switch (level) {
    case SilLevel::BelowSIL1: return "below SIL1";
    case SilLevel::SIL1: return "SIL1";
    case SilLevel::SIL2: return "SIL2";
    case SilLevel::SIL3: return "SIL3";
    case SilLevel::SIL4: return "SIL4";
  }
  return "?";
}

bool sensor_threshold_check(double accuracy, double threshold) {
  if (!is_probability(accuracy) || !is_probability(threshold)) {
    throw DomainError("accuracy and threshold must lie in [0,1]");
  }
  return accuracy >= threshold;
}

}  // namespace sisv
