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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "sisv/cli.hpp"
#include "sisv/spec_automaton.hpp"
#include "sisv/spec_lang.hpp"
#include "sisv/trace_io.hpp"

using namespace sisv;
using Json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

const std::string kRoot = SISV_SOURCE_DIR;
const std::string kReq = kRoot + "/requirements/default.req";
const std::string kScenario = kRoot + "/scenarios/default.scenario";

Result cli(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = fs::temp_directory_path() / ("sisv_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

std::vector<Json> json_lines(const std::string& text) {
  std::vector<Json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(Json::parse(line));
  return out;
}

}  // namespace

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("verify passes the default controller") {
  const auto r = cli({"verify", kReq});
  REQUIRE(r.code == kExitOk);
  const auto j = Json::parse(r.out);
  CHECK(j["command"] == "verify");
  CHECK(j["status"] == "pass");
  REQUIRE(j["results"].size() == 3);
  for (const auto& res : j["results"]) CHECK(res["verdict"] == "pass");
  CHECK(j["model"]["implementation_states"] == 53);
  CHECK_FALSE(j.contains("wall_times"));
}

TEST_CASE("verify reports mutant counterexamples in trace syntax") {
  const auto path = (fs::temp_directory_path() / "sisv_test_ce.trace").string();
  const auto r = cli({"verify", kReq, "--mutate=drop-stop-red", "--counterexample-out", path});
  REQUIRE(r.code == kExitVerificationFailure);
  const auto j = Json::parse(r.out);
  CHECK(j["status"] == "fail");
  const auto& ref = j["results"][0];
  CHECK(ref["check"] == "refinement");
  CHECK(ref["verdict"] == "fail");
  const auto trace = read_trace_file(path);
  REQUIRE(trace.events.size() == ref["counterexample"].size());
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    CHECK(to_string(trace.events[i]) == ref["counterexample"][i].get<std::string>());
  }
  ActionSet extra{Action::activate_alert(false), Action::turn_uvc(true), Action::set_speed(100)};
  const auto reqs = read_requirements_file(kReq);
  CHECK_FALSE(spec_accepts(compile_spec(reqs, extra), trace.events));
}

TEST_CASE("verify exit codes for bad input") {
  CHECK(cli({"verify", "missing.req"}).code == kExitInputError);
  CHECK(cli({"verify", kReq, "--check", "liveness"}).code == kExitInputError);
  CHECK(cli({"verify", kReq, "--max-idle", "1"}).code == kExitInputError);
  CHECK(cli({"verify", kReq, "--mutate", "drop-all"}).code == kExitInputError);
  CHECK(cli({"verify"}).code == kExitInputError);
  CHECK(cli({}).code == kExitInputError);
  CHECK(cli({"frobnicate"}).code == kExitInputError);
  const auto bad = temp_file("bad.req", "REQ A : whenever detection(human=any, zone=blue) then "
                                        "stop_robot within 2 ticks\n");
  const auto r = cli({"verify", bad});
  CHECK(r.code == kExitInputError);
  CHECK(r.err.find("blue") != std::string::npos);
  CHECK(r.err.find("line 1") != std::string::npos);
}

TEST_CASE("verify rejects the late scheduling variant") {
  const auto r = cli({"verify", kReq, "--controller", kRoot + "/configs/late.controller"});
  CHECK(r.code == kExitVerificationFailure);
  CHECK(cli({"verify", kReq, "--latency", "3"}).code == kExitVerificationFailure);
  CHECK(cli({"verify", kReq, "--controller", kRoot + "/configs/default.controller"}).code ==
        kExitOk);
}

TEST_CASE("verify selects individual checks") {
  const auto r = cli({"verify", kReq, "--check", "determinism", "--nondeterministic-discharge"});
  CHECK(r.code == kExitVerificationFailure);
  const auto j = Json::parse(r.out);
  REQUIRE(j["results"].size() == 1);
  CHECK(j["results"][0]["check"] == "determinism");
  CHECK(cli({"verify", kReq, "--check", "refinement", "--nondeterministic-discharge"}).code ==
        kExitOk);
}

TEST_CASE("verify depth oracle") {
  auto j = Json::parse(cli({"verify", kReq, "--depth-oracle", "6"}).out);
  CHECK(j["oracle"]["consistent_with_refinement"] == true);
  CHECK(j["oracle"]["rejected"].is_null());
  const auto r = cli({"verify", kReq, "--mutate", "drop-alert-r1", "--depth-oracle", "5"});
  CHECK(r.code == kExitVerificationFailure);
  j = Json::parse(r.out);
  CHECK(j["oracle"]["consistent_with_refinement"] == true);
  CHECK(j["oracle"]["rejected"].is_array());
}

TEST_CASE("verify timings are opt-in") {
  const auto j = Json::parse(cli({"verify", kReq, "--timings"}).out);
  CHECK(j.contains("wall_times"));
}

TEST_CASE("analyze bounded never exceeds unbounded") {
  const auto b = cli({"analyze", kScenario, "--bounded", "100"});
  const auto u = cli({"analyze", kScenario, "--unbounded"});
  REQUIRE(b.code == kExitOk);
  REQUIRE(u.code == kExitOk);
  const double pb = Json::parse(b.out)["result"]["probability"];
  const double pu = Json::parse(u.out)["result"]["probability"];
  CHECK(pb <= pu);
  CHECK(pb == doctest::Approx(0.028870025386663486).epsilon(1e-12));
  CHECK(pu == doctest::Approx(0.033287577213452296).epsilon(1e-9));
  const auto d = Json::parse(cli({"analyze", kScenario, "--unbounded", "--method", "direct"}).out);
  CHECK(d["result"]["probability"].get<double>() == doctest::Approx(pu).epsilon(1e-9));
  CHECK(Json::parse(u.out)["sensor_check"]["passed"] == true);
}

TEST_CASE("analyze option errors") {
  CHECK(cli({"analyze", kScenario}).code == kExitInputError);
  CHECK(cli({"analyze", kScenario, "--bounded", "3", "--unbounded"}).code == kExitInputError);
  CHECK(cli({"analyze", kScenario, "--bounded", "-3"}).code == kExitInputError);
  const auto bad = temp_file("bad.scenario", "p_detect = 2\n");
  CHECK(cli({"analyze", bad, "--unbounded"}).code == kExitInputError);
  const auto r = cli({"analyze", kScenario, "--unbounded", "--max-iterations", "3"});
  CHECK(r.code == kExitResourceError);
  CHECK(r.err.find("converge") != std::string::npos);
}

TEST_CASE("analyze zero-risk note") {
  const auto r = cli({"analyze", kRoot + "/scenarios/no-intrusion.scenario", "--unbounded", "--sil"});
  REQUIRE(r.code == kExitOk);
  const auto j = Json::parse(r.out);
  CHECK(j["result"]["probability"] == 0.0);
  CHECK(j["sil"]["band"] == "SIL4");
  CHECK(j["sil"]["note"].get<std::string>().find("zero-risk") != std::string::npos);
}

TEST_CASE("analyze sil band for a SIL2-range exposure") {
  const auto sc = temp_file("instant.scenario", "mitigation_latency = 0\n");
  const auto j = Json::parse(cli({"analyze", sc, "--unbounded", "--sil"}).out);
  const double p = j["result"]["probability"];
  CHECK(p > 1e-3);
  CHECK(p < 1e-2);
  CHECK(j["sil"]["band"] == "SIL2");
  CHECK_FALSE(j["sil"].contains("note"));
}

TEST_CASE("analyze warns about a weak detector") {
  const auto sc = temp_file("weak.scenario", "p_detect = 0.5\n");
  const auto r = cli({"analyze", sc, "--bounded", "10"});
  CHECK(r.code == kExitOk);
  CHECK(Json::parse(r.out)["sensor_check"]["passed"] == false);
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("simulate is reproducible and independent of jobs") {
  const std::vector<std::string> base = {"simulate", kScenario, "--runs", "20000", "--seed", "9"};
  const auto a = cli(base);
  const auto b = cli(base);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  auto with_jobs = base;
  with_jobs.insert(with_jobs.end(), {"--jobs", "3"});
  CHECK(cli(with_jobs).out == a.out);
  setenv(kJobsEnv, "2", 1);
  CHECK(cli(base).out == a.out);
  setenv(kJobsEnv, "zero", 1);
  CHECK(cli(base).code == kExitInputError);
  unsetenv(kJobsEnv);
  const auto j = Json::parse(a.out);
  CHECK(j["agreement"]["exact_bounded_probability"].get<double>() ==
        doctest::Approx(0.028870025386663486));
  CHECK(j["agreement"].contains("within_3_std_error"));
}

TEST_CASE("simulate input errors") {
  CHECK(cli({"simulate", kScenario, "--runs", "0"}).code == kExitInputError);
  CHECK(cli({"simulate", kScenario, "--jobs", "0"}).code == kExitInputError);
  CHECK(cli({"simulate", "nope.scenario"}).code == kExitInputError);
}

TEST_CASE("monitor a clean controller trace") {
  const auto sample = cli({"sample", "--steps", "50", "--seed", "4"});
  REQUIRE(sample.code == kExitOk);
  CHECK(cli({"sample", "--steps", "50", "--seed", "4"}).out == sample.out);
  const auto r = cli({"monitor", kReq, "-", "--near-miss"}, sample.out);
  CHECK(r.code == kExitOk);
  const auto lines = json_lines(r.out);
  REQUIRE_FALSE(lines.empty());
  const auto& summary = lines.back();
  CHECK(summary["record"] == "summary");
  CHECK(summary["first_violation"].is_null());
  for (const auto& v : summary["verdicts"]) {
    CHECK(v["verdict"] == "clean");
    CHECK(v.contains("near_misses"));
  }
}

TEST_CASE("monitor names the violated requirement and index") {
  const auto r = cli({"monitor", kReq, kRoot + "/traces/r4-late.trace"});
  CHECK(r.code == kExitVerificationFailure);
  const auto lines = json_lines(r.out);
  const auto& summary = lines.back();
  CHECK(summary["first_violation"]["requirement"] == "R4");
  CHECK(summary["first_violation"]["index"] == 4);
  CHECK_FALSE(summary["verdicts"][0].contains("near_misses"));
  bool saw_verdict = false;
  for (const auto& l : lines) {
    if (l["record"] == "verdict") {
      saw_verdict = true;
      CHECK(l["requirement"] == "R4");
      CHECK(l["line"] == 7);
    }
  }
  CHECK(saw_verdict);
}

TEST_CASE("monitor rejects malformed lines with their number") {
  const auto r = cli({"monitor", kReq}, "tock\ndetection trained blue\n");
  CHECK(r.code == kExitInputError);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(cli({"monitor", kReq, "missing.trace"}).code == kExitInputError);
}

TEST_CASE("export-lts prints the edge list") {
  const auto r = cli({"export-lts"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("# sisv lts v1\n# states 53 transitions 195 initial 0\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 195 + 2);
}

TEST_CASE("help and version exit cleanly") {
  const auto h = cli({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("verify") != std::string::npos);
  const auto v = cli({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find("sisv") != std::string::npos);
}
