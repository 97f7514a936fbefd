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

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "sisv/errors.hpp"
#include "sisv/stochastic.hpp"

using namespace sisv;

namespace {

using Rows = std::vector<std::vector<Dtmc::Entry>>;

Dtmc chain(const Rows& rows, std::vector<bool> target) {
  std::vector<double> init(rows.size(), 0.0);
  init[0] = 1.0;
  return Dtmc::from_rows(rows, init, std::move(target));
}

// s0 -0.3-> s1 -0.4-> target; otherwise s0 and s1 wait in place.
Dtmc three_state() {
  return chain({{{0, 0.7}, {1, 0.3}}, {{1, 0.6}, {2, 0.4}}, {{2, 1.0}}}, {false, false, true});
}

// Exposure chance q per attempt; after a miss, exit to safety with p_exit.
Dtmc retry_gadget(double q, double p_exit) {
  return chain({{{1, q}, {2, 1.0 - q}}, {{1, 1.0}}, {{3, p_exit}, {0, 1.0 - p_exit}}, {{3, 1.0}}},
               {false, true, false, false});
}

// Unbounded exposure computed by hand: with the arrival phase uniform over
// the cycle, a human arriving at phase j first meets the transition phase
// after f(j) ticks and is safe iff detected within the first f(j) - L + 1
// attempts.
double closed_form(const Scenario& sc) {
  if (sc.p_intrusion == 0.0) return 0.0;
  const int cycle = sc.treatment_ticks + sc.transition_ticks;
  double sum = 0.0;
  for (int j = 0; j < cycle; ++j) {
    int f = 0;
    while ((j + f) % cycle < sc.treatment_ticks) ++f;
    sum += std::pow(1.0 - sc.p_detect, std::max(0, f - sc.mitigation_latency + 1));
  }
  return sum / cycle;
}

std::vector<Scenario> scenario_grid() {
  std::vector<Scenario> out;
  for (double pd : {0.0, 0.3, 0.94, 1.0}) {
    for (int latency : {0, 1, 3}) {
      for (auto [treat, trans] : {std::pair{60, 2}, std::pair{5, 3}, std::pair{1, 1}}) {
        Scenario sc;
        sc.p_detect = pd;
        sc.mitigation_latency = latency;
        sc.treatment_ticks = treat;
        sc.transition_ticks = trans;
        sc.p_intrusion = 0.05;
        out.push_back(sc);
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("chains are validated on construction") {
  CHECK_THROWS_AS(chain({{{0, 0.5}}}, {false}), DomainError);
  CHECK_THROWS_AS(chain({{{0, 1.5}, {0, -0.5}}}, {false}), DomainError);
  CHECK_THROWS_AS(chain({{{3, 1.0}}}, {false}), DomainError);
  CHECK_THROWS_AS(Dtmc::from_rows({{{0, 1.0}}}, {0.5}, {false}), DomainError);
  CHECK_THROWS_AS(Dtmc::from_rows({{{0, 1.0}}}, {1.0}, {false, true}), DomainError);
  CHECK_NOTHROW(chain({{{0, 1.0 - 1e-13}}}, {false}));
}

TEST_CASE("bounded reachability on hand-sized chains") {
  const auto two = chain({{{0, 0.5}, {1, 0.5}}, {{1, 1.0}}}, {false, true});
  CHECK(prob_bounded_reach(two, 0) == 0.0);
  CHECK(prob_bounded_reach(two, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(prob_bounded_reach(two, 2) == doctest::Approx(0.75).epsilon(1e-12));

  const auto three = three_state();
  CHECK(std::abs(prob_bounded_reach(three, 1) - 0.0) < 1e-9);
  CHECK(std::abs(prob_bounded_reach(three, 2) - 0.3 * 0.4) < 1e-9);
  // k = 3: wait-then-go in either state, or go-go late.
  CHECK(std::abs(prob_bounded_reach(three, 3) - (0.12 + 0.7 * 0.12 + 0.3 * 0.6 * 0.4)) < 1e-9);
  CHECK_THROWS_AS(prob_bounded_reach(three, -1), DomainError);
}

TEST_CASE("initial target states count at step zero") {
  const auto c = Dtmc::from_rows({{{0, 1.0}}, {{1, 1.0}}}, {0.25, 0.75}, {true, false});
  CHECK(prob_bounded_reach(c, 0) == 0.25);
  CHECK(prob_reach(c).probability == 0.25);
}

TEST_CASE("unbounded reachability gadgets") {
  const auto branch = chain({{{1, 0.5}, {2, 0.5}}, {{1, 1.0}}, {{2, 1.0}}}, {false, true, false});
  CHECK(prob_reach(branch).probability == doctest::Approx(0.5));
  CHECK(prob_reach(branch, SolveMethod::Direct).probability == doctest::Approx(0.5));

  const auto unreachable = chain({{{0, 1.0}}, {{1, 1.0}}}, {false, true});
  const auto r = prob_reach(unreachable);
  CHECK(r.probability == 0.0);
  CHECK(r.iterations == 0);

  CHECK(prob_reach(three_state()).probability == doctest::Approx(1.0));

  for (double q : {0.01, 0.2, 0.5, 0.9}) {
    for (double p_exit : {0.001, 0.1, 0.7, 1.0}) {
      const double want = q / (q + (1 - q) * p_exit);
      const auto g = retry_gadget(q, p_exit);
      CHECK(std::abs(prob_reach(g, SolveMethod::ValueIteration, 1e-13).probability - want) < 1e-9);
      CHECK(std::abs(prob_reach(g, SolveMethod::Direct).probability - want) < 1e-9);
    }
  }
}

TEST_CASE("value iteration reports non-convergence with its residual") {
  try {
    prob_reach(retry_gadget(0.01, 0.001), SolveMethod::ValueIteration, 1e-12, 5);
    FAIL("expected non-convergence");
  } catch (const ResourceError& e) {
    CHECK(e.residual() > 1e-12);
    CHECK(e.reached() == 5);
  }
}

TEST_CASE("direct solve is limited to small chains") {
  Scenario sc;
  sc.treatment_ticks = 5000;
  CHECK(dtmc_size(sc) > kDirectSolveLimit);
  CHECK_THROWS_AS(prob_reach(build_dtmc(sc), SolveMethod::Direct), ConfigError);
}

TEST_CASE("constructed chains are stochastic") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    Scenario sc;
    sc.p_intrusion = u(rng);
    sc.p_detect = u(rng);
    sc.p_trained = u(rng);
    sc.treatment_ticks = 1 + static_cast<int>(rng() % 30);
    sc.transition_ticks = 1 + static_cast<int>(rng() % 5);
    sc.mitigation_latency = static_cast<int>(rng() % 4);
    const auto m = build_dtmc(sc);
    REQUIRE(m.max_row_error() <= 1e-12);
    REQUIRE(m.size() == dtmc_size(sc));
  }
  for (const auto& sc : scenario_grid()) CHECK(build_dtmc(sc).max_row_error() <= 1e-12);
}

TEST_CASE("no intrusion means no reachable exposure") {
  Scenario sc;
  sc.p_intrusion = 0.0;
  const auto m = build_dtmc(sc);
  const auto reach = m.reachable();
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (reach[s]) CHECK_FALSE(m.is_target(s));
  }
  CHECK(prob_reach(m).probability == 0.0);
  CHECK(prob_bounded_reach(m, 500) == 0.0);
}

TEST_CASE("perfect instant detection gives exactly zero") {
  Scenario sc;
  sc.p_detect = 1.0;
  sc.mitigation_latency = 0;
  for (double pi : {0.02, 0.5, 1.0}) {
    sc.p_intrusion = pi;
    const auto m = build_dtmc(sc);
    CHECK(prob_reach(m).probability == 0.0);
    CHECK(prob_reach(m, SolveMethod::Direct).probability == 0.0);
    CHECK(prob_bounded_reach(m, 300) == 0.0);
  }
}

TEST_CASE("exposure matches the closed form") {
  for (const auto& sc : scenario_grid()) {
    const auto m = build_dtmc(sc);
    const double want = closed_form(sc);
    CHECK(std::abs(prob_reach(m, SolveMethod::Direct).probability - want) < 1e-9);
    CHECK(std::abs(prob_reach(m, SolveMethod::ValueIteration, 1e-13).probability - want) < 1e-9);
  }
  const Scenario def;
  CHECK(std::abs(prob_reach(build_dtmc(def), SolveMethod::Direct).probability -
                 0.033287577213452296) < 1e-12);
}

TEST_CASE("bounded exposure grows with k toward the unbounded value") {
  const Scenario sc;
  const auto m = build_dtmc(sc);
  double prev = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double p = prob_bounded_reach(m, k);
    REQUIRE(p >= prev - 1e-15);
    prev = p;
  }
  const double unbounded = prob_reach(m, SolveMethod::Direct).probability;
  CHECK(prev <= unbounded + 1e-12);
  CHECK(std::abs(prob_bounded_reach(m, 3000) - unbounded) < 1e-9);
  // Regression values for the shipped example scenario.
  CHECK(prob_bounded_reach(m, 100) == doctest::Approx(0.028870025386663486).epsilon(1e-12));
}

TEST_CASE("exposure is monotone in detection and intrusion rates") {
  Scenario sc;
  double prev = 1.0;
  for (int i = 0; i <= 20; ++i) {
    sc.p_detect = i / 20.0;
    const double p = prob_bounded_reach(build_dtmc(sc), 150);
    CHECK(p <= prev + 1e-15);
    prev = p;
  }
  sc = Scenario{};
  prev = 0.0;
  for (int i = 0; i <= 20; ++i) {
    sc.p_intrusion = i / 20.0;
    const double p = prob_bounded_reach(build_dtmc(sc), 150);
    CHECK(p >= prev - 1e-15);
    prev = p;
  }
}

TEST_CASE("classification does not change exposure") {
  Scenario a;
  Scenario b;
  a.p_trained = 0.0;
  b.p_trained = 1.0;
  CHECK(prob_bounded_reach(build_dtmc(a), 100) ==
        doctest::Approx(prob_bounded_reach(build_dtmc(b), 100)).epsilon(1e-12));
}

TEST_CASE("monte carlo basics") {
  Scenario none;
  none.p_intrusion = 0.0;
  const auto z = monte_carlo(none, 1000, 100, 1);
  CHECK(z.estimate == 0.0);
  CHECK(z.std_error == 0.0);

  const Scenario sc;
  const auto a = monte_carlo(sc, 20000, 100, 42);
  const auto b = monte_carlo(sc, 20000, 100, 42);
  const auto c = monte_carlo(sc, 20000, 100, 42, 3);
  CHECK(a.hits == b.hits);
  CHECK(a.hits == c.hits);
  CHECK(a.estimate == c.estimate);
  CHECK(monte_carlo(sc, 20000, 100, 43).hits != a.hits);
  const double exact = prob_bounded_reach(build_dtmc(sc), 100);
  CHECK(std::abs(a.estimate - exact) <= 4 * a.std_error);
  CHECK(a.std_error == doctest::Approx(std::sqrt(a.estimate * (1 - a.estimate) / 20000)));

  CHECK_THROWS_AS(monte_carlo(sc, 0, 100, 1), DomainError);
  CHECK(monte_carlo(sc, 10, 0, 1).hits == 0);
}

TEST_CASE("monte carlo tracks the exact value for latency and short cycles") {
  Scenario sc;
  sc.treatment_ticks = 4;
  sc.transition_ticks = 2;
  sc.mitigation_latency = 2;
  sc.p_detect = 0.5;
  sc.p_intrusion = 0.1;
  const auto mc = monte_carlo(sc, 50000, 30, 7);
  const double exact = prob_bounded_reach(build_dtmc(sc), 30);
  CHECK(std::abs(mc.estimate - exact) <= 4 * mc.std_error);
}

TEST_CASE("pfd to sil bands") {
  CHECK(pfd_to_sil(0.05) == SilLevel::SIL1);
  CHECK(pfd_to_sil(3e-3) == SilLevel::SIL2);
  CHECK(pfd_to_sil(0.5) == SilLevel::BelowSIL1);
  CHECK(pfd_to_sil(1.0) == SilLevel::BelowSIL1);
  CHECK(pfd_to_sil(0.1) == SilLevel::BelowSIL1);
  CHECK(pfd_to_sil(0.01) == SilLevel::SIL1);
  CHECK(pfd_to_sil(1e-3) == SilLevel::SIL2);
  CHECK(pfd_to_sil(1e-4) == SilLevel::SIL3);
  CHECK(pfd_to_sil(9.99e-5) == SilLevel::SIL4);
  CHECK(pfd_to_sil(1e-5) == SilLevel::SIL4);
  CHECK(pfd_to_sil(0.0) == SilLevel::SIL4);
  CHECK_THROWS_AS(pfd_to_sil(-0.1), DomainError);
  CHECK_THROWS_AS(pfd_to_sil(1.01), DomainError);
  CHECK_THROWS_AS(pfd_to_sil(std::nan("")), DomainError);
  CHECK(to_string(SilLevel::SIL3) == "SIL3");
  CHECK(to_string(SilLevel::BelowSIL1) == "below SIL1");
}

TEST_CASE("smaller pfd never yields a lower level") {
  SilLevel prev = SilLevel::BelowSIL1;
  for (int i = 0; i <= 700; ++i) {
    const double pfd = std::pow(10.0, -i / 100.0);
    const auto level = pfd_to_sil(pfd);
    CHECK(level >= prev);
    prev = level;
  }
}

TEST_CASE("sensor threshold check") {
  CHECK(sensor_threshold_check(0.94, 0.70));
  CHECK(sensor_threshold_check(0.70, 0.70));
  CHECK_FALSE(sensor_threshold_check(0.69, 0.70));
  CHECK_THROWS_AS(sensor_threshold_check(1.2, 0.7), DomainError);
}

TEST_CASE("scenario files") {
  const auto sc = parse_scenario(
      "# sisv scenario v1\np_intrusion = 0.1\ntreatment_ticks = 12\nmitigation_latency = 0\n");
  CHECK(sc.p_intrusion == 0.1);
  CHECK(sc.treatment_ticks == 12);
  CHECK(sc.mitigation_latency == 0);
  CHECK(sc.p_detect == 0.94);

  Scenario odd;
  odd.p_intrusion = 0.1 + 0.2;
  odd.p_detect = 1.0 / 3.0;
  const auto back = parse_scenario(format_scenario(odd));
  CHECK(back.p_intrusion == odd.p_intrusion);
  CHECK(back.p_detect == odd.p_detect);

  CHECK_THROWS_AS(parse_scenario("p_detect = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("treatment_ticks = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("mitigation_latency = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("speed = 3\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario("p_detect = high\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario("p_detect\n"), ParseError);
}

TEST_CASE("shipped scenario is the built-in default") {
  const auto text = std::string(SISV_SOURCE_DIR) + "/scenarios/default.scenario";
  std::ifstream f(text);
  std::stringstream ss;
  ss << f.rdbuf();
  const auto sc = parse_scenario(ss.str());
  const Scenario def;
  CHECK(format_scenario(sc) == format_scenario(def));
}
