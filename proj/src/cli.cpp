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

#include "sisv/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <random>

#include "sisv/controller.hpp"
#include "sisv/errors.hpp"
#include "sisv/refinement.hpp"
#include "sisv/rv.hpp"
#include "sisv/spec_automaton.hpp"
#include "sisv/spec_lang.hpp"
#include "sisv/stochastic.hpp"
#include "sisv/trace_io.hpp"

#ifndef SISV_VERSION
#define SISV_VERSION "0.0.0"
#endif

namespace sisv {

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Accumulates the digest over named inputs, in the order they are read.
class Digest {
 public:
  void add(std::string_view name, std::string_view content) {
    h_ = fnv1a64(name, h_);
    h_ = fnv1a64(std::string_view("\0", 1), h_);
    h_ = fnv1a64(content, h_);
    h_ = fnv1a64(std::string_view("\0", 1), h_);
  }
  std::string str() const { return "fnv1a64:" + hex64(h_); }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

Json report_header(const std::string& command) {
  Json j;
  j["tool"] = "sisv";
  j["version"] = SISV_VERSION;
  j["command"] = command;
  return j;
}

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

Json trace_lines(const TimedTrace& trace) {
  Json lines = Json::array();
  for (const auto& e : trace) lines.push_back(to_string(e));
  return lines;
}

Json actions_json(const ActionSet& actions) {
  Json out = Json::array();
  for (const auto& a : actions) out.push_back(to_string(a));
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << content;
}

// --- controller options shared by verify, export-lts and sample -----------

struct ControllerOptions {
  std::string config_path;
  std::string mutation;
  int latency = -1;
  bool nondeterministic = false;
  int max_idle = 4;

  void attach(CLI::App* cmd) {
    cmd->add_option("--controller", config_path, "Controller configuration file");
    cmd->add_option("--mutate", mutation, "Inject a mutant, e.g. drop-stop-red");
    cmd->add_option("--latency", latency, "Override the discharge latency in ticks");
    cmd->add_flag("--nondeterministic-discharge", nondeterministic,
                  "Allow a due mitigation to be deferred by one tick");
    cmd->add_option("--max-idle", max_idle, "Bound on consecutive idle tocks before the next input")
        ->check(CLI::NonNegativeNumber);
  }

  ControllerConfig load(Digest& digest) const {
    ControllerConfig cfg;
    if (!config_path.empty()) {
      const auto text = read_text_file(config_path);
      digest.add(config_path, text);
      cfg = parse_controller_config(text);
    }
    if (!mutation.empty()) cfg.mutation = parse_mutation(mutation);
    if (latency >= 0) cfg.policy.latency = latency;
    if (nondeterministic) cfg.policy.nondeterministic = true;
    cfg.validate();
    return cfg;
  }

  Json describe(const ControllerConfig& cfg) const {
    Json j;
    j["nominal_speed"] = cfg.nominal_speed;
    j["slow_speed"] = cfg.slow_speed;
    j["deadline_budget"] = cfg.deadline_budget;
    j["discharge_latency"] = cfg.policy.latency;
    j["nondeterministic_discharge"] = cfg.policy.nondeterministic;
    j["mutation"] = cfg.mutation ? Json(cfg.mutation->name()) : Json(nullptr);
    j["max_idle"] = max_idle;
    return j;
  }
};

// --- verify ----------------------------------------------------------------

struct VerifyOptions {
  std::string requirements;
  ControllerOptions controller;
  std::string check = "all";
  int depth_oracle = -1;
  std::string counterexample_out;
  bool timings = false;
};

Json verdict_json(const std::string& check, const Verdict& v) {
  Json j;
  j["check"] = check;
  if (v.passed()) {
    j["verdict"] = "pass";
    j["states_explored"] = v.pass().states_explored;
    j["transitions"] = v.pass().transitions;
  } else {
    const auto& f = v.failure();
    j["verdict"] = "fail";
    j["reason"] = f.reason;
    j["failing_event"] = to_string(f.failing_event);
    j["counterexample"] = trace_lines(check == "refinement" ? f.full_trace() : f.counterexample);
  }
  return j;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  Digest digest;
  const auto req_text = read_text_file(o.requirements);
  digest.add(o.requirements, req_text);
  const auto reqs = parse_requirements(req_text);
  const auto cfg = o.controller.load(digest);

  auto t0 = Clock::now();
  const auto lts = build_lts(cfg, o.controller.max_idle);
  const double build_ms = elapsed_ms(t0);
  t0 = Clock::now();
  const auto spec = compile_spec(reqs, action_vocabulary(cfg));
  const double compile_ms = elapsed_ms(t0);

  Json report = report_header("verify");
  report["inputs"] = {{"requirements", o.requirements},
                      {"controller", o.controller.config_path.empty()
                                         ? Json(nullptr)
                                         : Json(o.controller.config_path)},
                      {"digest", digest.str()}};
  report["configuration"] = o.controller.describe(cfg);
  report["model"] = {{"implementation_states", lts.num_states()},
                     {"implementation_transitions", lts.num_transitions()},
                     {"specification_states", spec.num_states()},
                     {"specification_transitions", spec.num_transitions()}};

  const bool all = o.check == "all";
  Json results = Json::array();
  Json timings;
  timings["build_lts_ms"] = build_ms;
  timings["compile_spec_ms"] = compile_ms;
  bool ok = true;
  std::optional<Verdict> refinement;
  std::optional<TimedTrace> first_counterexample;

  auto run = [&](const std::string& name, auto&& fn) {
    const auto start = Clock::now();
    Verdict v = fn();
    timings[name + "_ms"] = elapsed_ms(start);
    results.push_back(verdict_json(name, v));
    if (!v.passed()) {
      ok = false;
      if (!first_counterexample) {
        first_counterexample =
            name == "refinement" ? v.failure().full_trace() : v.failure().counterexample;
      }
    }
    return v;
  };
  if (all || o.check == "refinement") {
    refinement = run("refinement", [&] { return check_traces_refinement(lts, spec); });
  }
  if (all || o.check == "deadlock") run("deadlock", [&] { return check_deadlock_freedom(lts); });
  if (all || o.check == "determinism") run("determinism", [&] { return check_determinism(lts); });
  report["results"] = results;

  if (o.depth_oracle >= 0) {
    const auto start = Clock::now();
    const auto depth = static_cast<std::size_t>(o.depth_oracle);
    const auto traces = enumerate_traces(lts, depth);
    std::optional<TimedTrace> rejected;
    for (const auto& t : traces) {
      if (!spec_accepts(spec, t)) {
        rejected = t;
        break;
      }
    }
    if (!refinement) refinement = check_traces_refinement(lts, spec);
    // A refinement failure is only visible to the oracle within its depth.
    const bool visible = !refinement->passed() && refinement->failure().full_trace().size() <= depth;
    const bool consistent = rejected.has_value() == visible;
    Json oracle;
    oracle["depth"] = depth;
    oracle["traces"] = traces.size();
    oracle["rejected"] = rejected ? trace_lines(*rejected) : Json(nullptr);
    oracle["consistent_with_refinement"] = consistent;
    report["oracle"] = oracle;
    timings["oracle_ms"] = elapsed_ms(start);
    if (!consistent) ok = false;
  }

  if (o.timings) report["wall_times"] = timings;
  report["status"] = ok ? "pass" : "fail";
  if (first_counterexample && !o.counterexample_out.empty()) {
    write_file(o.counterexample_out, format_trace(*first_counterexample));
  }
  out << report.dump(2) << '\n';
  return ok ? kExitOk : kExitVerificationFailure;
}

// --- analyze and simulate --------------------------------------------------

Json scenario_json(const Scenario& sc) {
  Json j;
  j["p_intrusion"] = sc.p_intrusion;
  j["p_detect"] = sc.p_detect;
  j["p_trained"] = sc.p_trained;
  j["transition_ticks"] = sc.transition_ticks;
  j["treatment_ticks"] = sc.treatment_ticks;
  j["mitigation_latency"] = sc.mitigation_latency;
  j["accuracy_threshold"] = sc.accuracy_threshold;
  return j;
}

Scenario load_scenario(const std::string& path, Digest& digest) {
  const auto text = read_text_file(path);
  digest.add(path, text);
  return parse_scenario(text);
}

void require_chain_budget(const Scenario& sc) {
  if (dtmc_size(sc) > kMaxChainStates) {
    throw ResourceError("chain would exceed " + std::to_string(kMaxChainStates) + " states",
                        dtmc_size(sc));
  }
}

struct AnalyzeOptions {
  std::string scenario;
  int bounded = -1;
  bool unbounded = false;
  std::string method = "value-iteration";
  double tolerance = 1e-12;
  std::size_t max_iterations = 10'000'000;
  bool sil = false;
  bool timings = false;
};

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out, std::ostream& err) {
  Digest digest;
  const auto sc = load_scenario(o.scenario, digest);
  if ((o.bounded >= 0) == o.unbounded) {
    throw ConfigError("choose exactly one of --bounded K and --unbounded");
  }
  require_chain_budget(sc);
  auto start = Clock::now();
  const auto chain = build_dtmc(sc);
  const double build_ms = elapsed_ms(start);
  const auto reachable = chain.reachable();

  Json report = report_header("analyze");
  report["inputs"] = {{"scenario", o.scenario}, {"digest", digest.str()}};
  report["scenario"] = scenario_json(sc);
  report["chain"] = {{"states", chain.size()},
                     {"reachable_states", std::count(reachable.begin(), reachable.end(), true)},
                     {"transitions", chain.num_transitions()},
                     {"max_row_error", chain.max_row_error()}};

  start = Clock::now();
  double probability = 0.0;
  Json result;
  if (o.bounded >= 0) {
    report["query"] = {{"kind", "bounded"}, {"steps", o.bounded}};
    probability = prob_bounded_reach(chain, o.bounded);
    result["probability"] = probability;
    result["method"] = "forward-propagation";
    result["residual"] = 0.0;
    result["iterations"] = o.bounded;
  } else {
    report["query"] = {{"kind", "unbounded"}};
    const auto method = o.method == "direct" ? SolveMethod::Direct : SolveMethod::ValueIteration;
    const auto r = prob_reach(chain, method, o.tolerance, o.max_iterations);
    probability = r.probability;
    result["probability"] = probability;
    result["method"] = o.method;
    result["residual"] = r.residual;
    result["iterations"] = r.iterations;
  }
  report["result"] = result;

  const bool sensor_ok = sensor_threshold_check(sc.p_detect, sc.accuracy_threshold);
  report["sensor_check"] = {{"accuracy", sc.p_detect},
                            {"threshold", sc.accuracy_threshold},
                            {"passed", sensor_ok}};
  if (!sensor_ok) {
    err << "warning: detector accuracy " << sc.p_detect << " is below the threshold "
        << sc.accuracy_threshold << '\n';
  }

  if (o.sil) {
    Json sil;
    sil["pfd"] = probability;
    sil["band"] = to_string(pfd_to_sil(probability));
    if (probability == 0.0) {
      sil["note"] =
          "zero-risk: the exposure probability is exactly 0 under this model; SIL4 is the "
          "highest band defined, so it is reported by convention";
    }
    report["sil"] = sil;
  }
  if (o.timings) report["wall_times"] = {{"build_ms", build_ms}, {"solve_ms", elapsed_ms(start)}};
  out << report.dump(2) << '\n';
  return kExitOk;
}

struct SimulateOptions {
  std::string scenario;
  long long runs = 100'000;
  int horizon = 100;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  bool timings = false;
};

unsigned default_jobs() {
  if (const char* env = std::getenv(kJobsEnv)) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string(kJobsEnv) + " must be a positive integer");
  }
  return 1;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  Digest digest;
  const auto sc = load_scenario(o.scenario, digest);
  if (o.runs < 1) throw ConfigError("--runs must be at least 1");
  if (o.horizon < 0) throw ConfigError("--horizon must be nonnegative");
  const unsigned jobs = o.jobs > 0 ? o.jobs : default_jobs();

  const auto start = Clock::now();
  const auto mc = monte_carlo(sc, static_cast<std::size_t>(o.runs), o.horizon, o.seed, jobs);
  const double sim_ms = elapsed_ms(start);

  Json report = report_header("simulate");
  report["inputs"] = {{"scenario", o.scenario}, {"digest", digest.str()}};
  report["scenario"] = scenario_json(sc);
  report["parameters"] = {{"runs", o.runs}, {"horizon", o.horizon}, {"seed", o.seed}};
  report["estimate"] = {{"probability", mc.estimate},
                        {"std_error", mc.std_error},
                        {"hits", mc.hits},
                        {"runs", mc.runs}};
  if (dtmc_size(sc) <= kMaxChainStates) {
    const double exact = prob_bounded_reach(build_dtmc(sc), o.horizon);
    const double diff = std::abs(mc.estimate - exact);
    Json agreement;
    agreement["exact_bounded_probability"] = exact;
    agreement["abs_difference"] = diff;
    agreement["within_3_std_error"] = diff <= 3.0 * mc.std_error;
    report["agreement"] = agreement;
  } else {
    report["agreement"] = {{"skipped", "chain exceeds the state budget"}};
  }
  if (o.timings) report["wall_times"] = {{"simulate_ms", sim_ms}};
  out << report.dump(2) << '\n';
  return kExitOk;
}

// --- monitor ---------------------------------------------------------------

struct MonitorOptions {
  std::string requirements;
  std::string trace = "-";
  bool near_miss = false;
};

int cmd_monitor(const MonitorOptions& o, std::istream& in, std::ostream& out) {
  Digest digest;
  const auto req_text = read_text_file(o.requirements);
  digest.add(o.requirements, req_text);
  const auto reqs = parse_requirements(req_text);

  std::ifstream file;
  std::istream* source = &in;
  if (o.trace != "-") {
    file.open(o.trace, std::ios::binary);
    if (!file) throw ConfigError("cannot open '" + o.trace + "'");
    source = &file;
  }

  MonitorBank bank(synthesize_monitors(reqs));
  std::vector<bool> was_clean(reqs.size(), true);
  std::size_t emitted = 0;
  std::string line;
  std::size_t lineno = 0;
  std::uint64_t trace_hash = 0xcbf29ce484222325ULL;

  // Records are written as soon as the event that causes them arrives.
  while (std::getline(*source, line)) {
    ++lineno;
    trace_hash = fnv1a64(line + "\n", trace_hash);
    const auto event = parse_trace_line(line, lineno);
    if (!event) continue;
    bank.feed(*event);
    const auto& triggers = bank.triggers();
    for (; emitted < triggers.size(); ++emitted) {
      const auto& t = triggers[emitted];
      Json rec;
      rec["record"] = "trigger";
      rec["index"] = t.event_index;
      rec["line"] = lineno;
      rec["requirement"] = t.requirement_id;
      rec["kind"] = to_string(t.kind);
      rec["actions"] = actions_json(t.actions);
      out << rec.dump() << '\n';
    }
    const auto& monitors = bank.monitors();
    for (std::size_t i = 0; i < monitors.size(); ++i) {
      if (was_clean[i] && !monitors[i].clean()) {
        was_clean[i] = false;
        Json rec;
        rec["record"] = "verdict";
        rec["index"] = monitors[i].verdict->event_index;
        rec["line"] = lineno;
        rec["requirement"] = monitors[i].requirement.id;
        rec["verdict"] = "violated";
        out << rec.dump() << '\n';
      }
    }
    out.flush();
  }

  const auto report = bank.report();
  Json summary = report_header("monitor");
  summary["record"] = "summary";
  summary["inputs"] = {{"requirements", o.requirements},
                       {"trace", o.trace},
                       {"digest", digest.str() + "+" + hex64(trace_hash)}};
  summary["events"] = report.events;
  Json verdicts = Json::array();
  for (const auto& r : report.outcomes) {
    Json v;
    v["requirement"] = r.requirement_id;
    v["verdict"] = r.violation ? "violated" : "clean";
    v["violation_index"] = r.violation ? Json(r.violation->event_index) : Json(nullptr);
    if (o.near_miss) v["near_misses"] = r.near_misses;
    verdicts.push_back(v);
  }
  summary["verdicts"] = verdicts;
  if (const auto first = report.first_violation()) {
    summary["first_violation"] = {{"index", first->event_index},
                                  {"requirement", first->requirement_id}};
  } else {
    summary["first_violation"] = nullptr;
  }
  out << summary.dump() << '\n';
  return report.all_clean() ? kExitOk : kExitVerificationFailure;
}

// --- export-lts and sample -------------------------------------------------

int cmd_export_lts(const ControllerOptions& o, std::ostream& out) {
  Digest digest;
  const auto cfg = o.load(digest);
  const auto lts = build_lts(cfg, o.max_idle);
  out << "# sisv lts v1\n"
      << "# states " << lts.num_states() << " transitions " << lts.num_transitions()
      << " initial " << lts.initial() << '\n'
      << lts.edge_list();
  return kExitOk;
}

struct SampleOptions {
  ControllerOptions controller;
  int steps = 40;
  std::uint64_t seed = 1;
};

// Uniform random walk over the controller's transitions.
int cmd_sample(const SampleOptions& o, std::ostream& out) {
  Digest digest;
  const auto cfg = o.controller.load(digest);
  const auto lts = build_lts(cfg, o.controller.max_idle);
  std::mt19937_64 rng(o.seed);
  TimedTrace trace;
  int state = lts.initial();
  for (int i = 0; i < o.steps; ++i) {
    const auto edges = lts.successors(state);
    if (edges.empty()) break;
    const auto& e = edges[rng() % edges.size()];
    trace.push_back(e.event);
    state = e.target;
  }
  out << format_trace(trace);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Verification toolkit for a discrete-time UVC robot safety controller", "sisv"};
  app.set_version_flag("--version", std::string("sisv ") + SISV_VERSION);
  app.require_subcommand(1);

  VerifyOptions verify;
  auto* v = app.add_subcommand("verify", "Check the controller against a requirement set");
  v->add_option("requirements", verify.requirements, "Requirement file (.req)")->required();
  verify.controller.attach(v);
  v->add_option("--check", verify.check, "refinement, deadlock, determinism or all")
      ->check(CLI::IsMember({"refinement", "deadlock", "determinism", "all"}));
  v->add_option("--depth-oracle", verify.depth_oracle,
                "Cross-check refinement by enumerating traces up to this length")
      ->check(CLI::NonNegativeNumber);
  v->add_option("--counterexample-out", verify.counterexample_out,
                "Write the first counterexample as a trace file");
  v->add_flag("--timings", verify.timings, "Include wall-clock times in the report");

  AnalyzeOptions analyze;
  auto* a = app.add_subcommand("analyze", "Exposure probability of a scenario");
  a->add_option("scenario", analyze.scenario, "Scenario file (.scenario)")->required();
  auto* bounded = a->add_option("--bounded", analyze.bounded, "Step bound K")
                      ->check(CLI::NonNegativeNumber);
  auto* unbounded = a->add_flag("--unbounded", analyze.unbounded, "Unbounded reachability");
  bounded->excludes(unbounded);
  a->add_option("--method", analyze.method, "value-iteration or direct")
      ->check(CLI::IsMember({"value-iteration", "direct"}));
  a->add_option("--tolerance", analyze.tolerance, "Value-iteration stopping threshold")
      ->check(CLI::PositiveNumber);
  a->add_option("--max-iterations", analyze.max_iterations, "Value-iteration sweep budget")
      ->check(CLI::PositiveNumber);
  a->add_flag("--sil", analyze.sil, "Interpret the probability as a PFD and report its band");
  a->add_flag("--timings", analyze.timings, "Include wall-clock times in the report");

  SimulateOptions simulate;
  auto* s = app.add_subcommand("simulate", "Monte Carlo estimate of bounded exposure");
  s->add_option("scenario", simulate.scenario, "Scenario file (.scenario)")->required();
  s->add_option("--runs", simulate.runs, "Number of simulated demands");
  s->add_option("--horizon", simulate.horizon, "Ticks per run");
  s->add_option("--seed", simulate.seed, "Base seed");
  s->add_option("--jobs", simulate.jobs, std::string("Worker threads (default $") + kJobsEnv + " or 1)")
      ->check(CLI::PositiveNumber);
  s->add_flag("--timings", simulate.timings, "Include wall-clock times in the report");

  MonitorOptions monitor;
  auto* m = app.add_subcommand("monitor", "Run requirement monitors over a trace or stdin");
  m->add_option("requirements", monitor.requirements, "Requirement file (.req)")->required();
  m->add_option("trace", monitor.trace, "Trace file, or - for standard input");
  m->add_flag("--near-miss", monitor.near_miss, "Report near-miss counts");

  ControllerOptions export_opts;
  auto* x = app.add_subcommand("export-lts", "Print the controller transition system");
  export_opts.attach(x);

  SampleOptions sample;
  auto* p = app.add_subcommand("sample", "Print a random controller trace");
  sample.controller.attach(p);
  p->add_option("--steps", sample.steps, "Trace length")->check(CLI::NonNegativeNumber);
  p->add_option("--seed", sample.seed, "Random seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }

  try {
    if (v->parsed()) return cmd_verify(verify, out);
    if (a->parsed()) return cmd_analyze(analyze, out, err);
    if (s->parsed()) return cmd_simulate(simulate, out);
    if (m->parsed()) return cmd_monitor(monitor, in, out);
    if (x->parsed()) return cmd_export_lts(export_opts, out);
    if (p->parsed()) return cmd_sample(sample, out);
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitResourceError;
  } catch (const AlphabetError& e) {
    err << "error: " << e.what() << ':';
    for (const auto& name : e.events()) err << ' ' << name << ';';
    err << '\n';
    return kExitInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace sisv
