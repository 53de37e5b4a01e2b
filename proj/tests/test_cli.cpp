#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wittdiff/jobspec.hpp"

using namespace wittdiff;
using nlohmann::json;

#ifndef WITTDIFF_CLI_PATH
#define WITTDIFF_CLI_PATH "wittdiff"
#endif
#ifndef WITTDIFF_DATA_DIR
#define WITTDIFF_DATA_DIR "data"
#endif

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string out_path = "/tmp/wittdiff_cli_out.txt";
  std::string cmd = std::string(WITTDIFF_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
  int rc = std::system(cmd.c_str());
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(rc), ss.str()};
}

std::string data_file(const std::string& name) {
  return std::string(WITTDIFF_DATA_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("omega reports free rank n+1 on affine 2-space") {
  auto r = run_cli("--command omega --input " + data_file("affine2.json"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("free of rank 3") != std::string::npos);
}

TEST_CASE("lift finds x -> x^3 on P^1 and reports Absent on the genus-1 example") {
  auto r = run_cli("--command lift --input " + data_file("p1.json") + " --json /tmp/wd_lift.json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("x -> x^3") != std::string::npos);
  CHECK(r.out.find("y -> y^3") != std::string::npos);
  json j = json::parse(slurp("/tmp/wd_lift.json"));
  CHECK(j["found"] == true);
  CHECK(j["charts"]["A"]["x"] == "x^3");

  auto r2 = run_cli("--command lift --input " + data_file("genus1_supersingular.json") +
                    " --json /tmp/wd_lift2.json");
  CHECK(r2.exit_code == 2);
  json j2 = json::parse(slurp("/tmp/wd_lift2.json"));
  CHECK(j2["found"] == false);
}

TEST_CASE("compare returns the kappa = -h verdict with a witness") {
  auto r = run_cli("--command compare --input " + data_file("genus1_supersingular.json") +
                   " --json /tmp/wd_cmp.json");
  CHECK(r.exit_code == 0);
  json j = json::parse(slurp("/tmp/wd_cmp.json"));
  CHECK(j["verdict"] == true);
  CHECK(j.contains("witness"));
  CHECK(j.contains("window"));
  CHECK(j.contains("stabilized"));
  CHECK(j.contains("class_coefficients"));
}

TEST_CASE("kappa is a nonzero cocycle on the genus-1 example") {
  auto r = run_cli("--command kappa --input " + data_file("genus1_supersingular.json") +
                   " --json /tmp/wd_kappa.json");
  CHECK(r.exit_code == 0);
  json j = json::parse(slurp("/tmp/wd_kappa.json"));
  CHECK(j["zero_cocycle"] == false);
  CHECK(j["class_coefficients"].contains("pairs"));
}

TEST_CASE("gm cross-checks the cup product") {
  auto r = run_cli("--command gm --input " + data_file("genus1_supersingular.json") +
                   " --json /tmp/wd_gm.json");
  CHECK(r.exit_code == 0);
  json j = json::parse(slurp("/tmp/wd_gm.json"));
  CHECK(j["sigma_lift_exact_match"] == true);
  CHECK(j["equal_mod_coboundary"] == true);
}

TEST_CASE("machine output is byte-identical across runs") {
  run_cli("--command kappa --input " + data_file("genus1_supersingular.json") +
          " --json /tmp/wd_d1.json");
  run_cli("--command kappa --input " + data_file("genus1_supersingular.json") +
          " --json /tmp/wd_d2.json");
  CHECK(slurp("/tmp/wd_d1.json") == slurp("/tmp/wd_d2.json"));
  CHECK(!slurp("/tmp/wd_d1.json").empty());
}

TEST_CASE("axioms succeed under several seeds") {
  for (const char* seed : {"1", "42"}) {
    auto r = run_cli(std::string("--command axioms --seed ") + seed);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
  }
}

TEST_CASE("chart-level obstruction at a tiny degree bound exits with code 2") {
  auto r = run_cli("--command kappa --input " + data_file("genus1_supersingular.json") +
                   " --degree-bound 0 --json /tmp/wd_obstructed.json");
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("chart-level obstruction") != std::string::npos);
  json j = json::parse(slurp("/tmp/wd_obstructed.json"));
  CHECK(j["obstructed"] == true);
}

TEST_CASE("user-supplied modulus drives computations over F_9") {
  {
    std::ofstream f("/tmp/wd_f9.json");
    f << R"({"p": 3, "modulus": [1, 0],
             "charts": [{"name": "A", "vars": ["x"]},
                        {"name": "B", "vars": ["y"]}],
             "overlaps": [{"charts": ["A", "B"], "s": "x", "t": "y",
                           "to_first": {"y": "x_inv", "y_inv": "x"},
                           "to_second": {"x": "y_inv", "x_inv": "y"}}]})";
  }
  auto r = run_cli("--command lift --input /tmp/wd_f9.json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("x -> x^3") != std::string::npos);
  // a reducible modulus is rejected
  {
    std::ofstream f("/tmp/wd_f9bad.json");
    f << R"({"p": 3, "modulus": [2, 0], "charts": [{"name": "A", "vars": ["x"]}]})";
  }
  auto r2 = run_cli("--command omega --input /tmp/wd_f9bad.json");
  CHECK(r2.exit_code == 1);
  CHECK(r2.out.find("irreducible") != std::string::npos);
}

TEST_CASE("help text is available") {
  auto r = run_cli("--help");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("--command") != std::string::npos);
}

TEST_CASE("input errors exit with code 1 and a diagnostic") {
  // malformed JSON
  {
    std::ofstream bad("/tmp/wd_bad.json");
    bad << "{ not json";
  }
  auto r = run_cli("--command omega --input /tmp/wd_bad.json");
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("error") != std::string::npos);

  // unknown variable in a relation, with line/column in the message
  {
    std::ofstream bad("/tmp/wd_bad2.json");
    bad << R"({"p": 3, "charts": [{"name": "A", "vars": ["x"], "relations": ["x + z"]}]})";
  }
  auto r2 = run_cli("--command omega --input /tmp/wd_bad2.json");
  CHECK(r2.exit_code == 1);
  CHECK(r2.out.find("unknown variable") != std::string::npos);

  // p must be an odd prime
  {
    std::ofstream bad("/tmp/wd_bad3.json");
    bad << R"({"p": 4, "charts": [{"name": "A", "vars": ["x"]}]})";
  }
  auto r3 = run_cli("--command omega --input /tmp/wd_bad3.json");
  CHECK(r3.exit_code == 1);

  // unknown command
  auto r4 = run_cli("--command bogus --input " + data_file("affine2.json"));
  CHECK(r4.exit_code == 1);
}

TEST_CASE("run_job library entry point: semantic errors") {
  JobOptions opts;
  // non-flat presentation aborts with a diagnostic
  json doc = {{"p", 3},
              {"charts", json::array({json{{"name", "A"},
                                           {"vars", json::array({"x"})},
                                           {"relations", json::array({"p*x"})}}})}};
  Report rep = run_job(doc, "omega", opts);
  CHECK(rep.exit_code == 1);
  CHECK(rep.machine["error"].get<std::string>().find("flat") != std::string::npos);

  // gm without a section
  json doc2 = {{"p", 3},
               {"charts", json::array({json{{"name", "A"}, {"vars", json::array({"x"})}}})}};
  Report rep2 = run_job(doc2, "gm", opts);
  CHECK(rep2.exit_code == 1);
  CHECK(rep2.machine["error"].get<std::string>().find("section") != std::string::npos);
}

TEST_CASE("gm section that is not global is rejected with exit 1") {
  json doc;
  std::ifstream in(data_file("genus1_supersingular.json"));
  in >> doc;
  doc["section"]["A"] = json::array({"1", "0"});  // F*dx alone does not glue
  JobOptions opts;
  Report rep = run_job(doc, "gm", opts);
  CHECK(rep.exit_code == 1);
  CHECK(rep.machine["error"].get<std::string>().find("global section") != std::string::npos);
}
