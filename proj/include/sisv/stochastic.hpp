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

#ifndef SISV_STOCHASTIC_HPP_
#define SISV_STOCHASTIC_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sisv {

/**
 * One intrusion demand on the UVC treatment robot.
 *
 * The robot cycles through `treatment_ticks` of in-row treatment followed by
 * `transition_ticks` of row transition. A human enters with probability
 * `p_intrusion` per tick and stays; the detector spots a present human with
 * probability `p_detect` per tick, and the UVC lamp goes off
 * `mitigation_latency` ticks after detection. The numbers below are an
 * example configuration, not measured values.
 */
struct Scenario {
  double p_intrusion = 0.02;
  double p_detect = 0.94;
  double p_trained = 0.6;
  int transition_ticks = 2;
  int treatment_ticks = 60;
  int mitigation_latency = 1;
  /// Minimum classification accuracy the detector must reach.
  double accuracy_threshold = 0.70;

  /// Throws ConfigError for probabilities outside [0,1], durations below 1
  /// or a negative latency.
  void validate() const;
};

inline constexpr std::string_view kScenarioHeader = "# sisv scenario v1";

Scenario parse_scenario(std::string_view text);
std::string format_scenario(const Scenario& sc);

/// Sparse discrete-time Markov chain with a target label.
class Dtmc {
 public:
  struct Entry {
    int target;
    double probability;
  };

  /**
   * Validates and packs a chain. Throws DomainError when an entry is negative
   * or out of range, a row does not sum to 1 within 1e-12, or the initial
   * distribution is malformed.
   */
  static Dtmc from_rows(const std::vector<std::vector<Entry>>& rows,
                        std::vector<double> initial, std::vector<bool> target,
                        std::vector<std::string> names = {});

  std::size_t size() const { return initial_.size(); }
  std::size_t num_transitions() const { return entries_.size(); }
  std::span<const Entry> row(std::size_t state) const {
    return {entries_.data() + offsets_[state], entries_.data() + offsets_[state + 1]};
  }
  const std::vector<double>& initial() const { return initial_; }
  bool is_target(std::size_t state) const { return target_[state]; }
  const std::string& name(std::size_t state) const { return names_[state]; }

  /// max over rows of |sum - 1|
  double max_row_error() const;
  /// States with positive probability of being visited.
  std::vector<bool> reachable() const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Entry> entries_;
  std::vector<double> initial_;
  std::vector<bool> target_;
  std::vector<std::string> names_;
};

/// Product of robot phase, human presence and detector; target = exposure.
Dtmc build_dtmc(const Scenario& sc);

/// Number of states build_dtmc(sc) would produce, without building it.
std::size_t dtmc_size(const Scenario& sc);

/// Probability of visiting a target state within k steps.
double prob_bounded_reach(const Dtmc& m, int k);

enum class SolveMethod { ValueIteration, Direct };

struct ReachResult {
  double probability;
  double residual;
  std::size_t iterations;
  SolveMethod method;
};

/**
 * Probability of ever visiting a target state. States that cannot reach the
 * target are fixed to 0 first. Value iteration stops once the largest update
 * falls below `tolerance` and throws ResourceError (carrying the residual)
 * after `max_iterations`. The direct method solves the linear system with a
 * sparse LU factorization and accepts chains below 10^4 states.
 */
ReachResult prob_reach(const Dtmc& m, SolveMethod method = SolveMethod::ValueIteration,
                       double tolerance = 1e-10, std::size_t max_iterations = 10'000'000);

inline constexpr std::size_t kDirectSolveLimit = 10'000;

struct McEstimate {
  double estimate;
  double std_error;
  std::size_t hits;
  std::size_t runs;
};

/**
 * Simulates the scenario directly, without the chain. Run r draws from its
 * own generator seeded from (seed, r), so results do not depend on `jobs`.
 */
McEstimate monte_carlo(const Scenario& sc, std::size_t runs, int horizon,
                       std::uint64_t seed, unsigned jobs = 1);

/// Declaration order is integrity order.
enum class SilLevel { BelowSIL1, SIL1, SIL2, SIL3, SIL4 };

/**
 * Lower PFD edges of SIL1..SIL4 and the floor of the SIL4 band (low-demand
 * convention). Each level is a tenfold reduction.
 */
struct SilBands {
  std::array<double, 5> edges = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
};

/**
 * SIL1 for [1e-2, 1e-1), SIL2 for [1e-3, 1e-2), SIL3 for [1e-4, 1e-3), SIL4
 * below 1e-4, BelowSIL1 from 1e-1. There is no level above SIL4, so PFDs under
 * the SIL4 floor still map to SIL4. Throws DomainError outside [0,1].
 */
SilLevel pfd_to_sil(double pfd, const SilBands& bands = {});

std::string to_string(SilLevel level);

/// accuracy >= threshold; both must lie in [0,1] (DomainError otherwise).
bool sensor_threshold_check(double accuracy, double threshold);

}  // namespace sisv

#endif  // SISV_STOCHASTIC_HPP_
