#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "quadratize/cli.hpp"

using namespace quadratize;
using ojson = nlohmann::ordered_json;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::ostringstream out, err;
  std::istringstream in(stdin_text);
  int code = run_cli(std::move(args), out, err, in);
  return {code, out.str(), err.str()};
}

std::vector<std::string> doc_keys(const ojson& j) {
  std::vector<std::string> keys;
  for (const auto& item : j.items()) keys.push_back(item.key());
  return keys;
}

}  // namespace

TEST_CASE("exit codes separate success, absence, usage, and indeterminacy") {
  struct Fixture {
    std::vector<std::string> args;
    int expected;
  };
  const std::vector<Fixture> fixtures = {
      {{"quadratize", "x^10"}, 0},
      {{"check-one-var", "(x+1)^7"}, 0},
      {{"eliminate"}, 0},
      {{"matrices"}, 0},
      {{"check-one-var", "x^5 + x^3"}, 1},
      {{"verify", "x^5", "--vars", "x^2"}, 1},
      {{"search", "(x+1)^6", "--max-order", "2"}, 1},
      {{"quadratize", "2x^6 + x^3", "--strategy", "degree6", "--mode", "exact"}, 1},
      {{"frobnicate"}, 2},
      {{"quadratize"}, 2},
      {{"quadratize", "x +"}, 2},
      {{"quadratize", "1/0"}, 2},
      {{"quadratize", "0"}, 2},
      {{"quadratize", "0.5x^3", "--mode", "exact"}, 2},
      {{"quadratize", "x^3", "--strategy", "bogus"}, 2},
      {{"quadratize", "x^3", "--format", "yaml"}, 2},
      {{"simulate", "x^3", "--T", "-1"}, 2},
      {{"eliminate", "--n", "4"}, 2},
      {{"verify", "x^3", "--vars", "x^2 + 0.000001x^3", "--mode", "float", "--tolerance",
        "7e-7"},
       3},
  };
  for (const auto& f : fixtures) {
    CAPTURE(f.args);
    REQUIRE(run(f.args).code == f.expected);
  }
}

TEST_CASE("json output has a stable five-key schema and is deterministic") {
  const std::vector<std::vector<std::string>> commands = {
      {"quadratize", "x^10", "--format", "json"},
      {"check-one-var", "x^5 + x^3", "--format", "json"},
      {"search", "x^5 + x^3", "--format", "json"},
      {"verify", "x^5 + x^4 + x^3 + x^2 + x + 1", "--vars", "x^4;x^3", "--format", "json"},
      {"simulate", "x^3", "--T", "0.2", "--format", "json"},
      {"eliminate", "--format", "json"},
      {"matrices", "--format", "json"},
  };
  for (const auto& args : commands) {
    CAPTURE(args);
    RunResult first = run(args);
    ojson doc = ojson::parse(first.out);
    REQUIRE(doc_keys(doc) ==
            std::vector<std::string>{"command", "mode", "input", "result", "diagnostics"});
    REQUIRE(doc["command"] == args[0]);
    REQUIRE(doc["diagnostics"].is_array());
    // byte-identical on a second run
    REQUIRE(run(args).out == first.out);
  }
}

TEST_CASE("a pure power quadratizes to one squared variable") {
  RunResult r = run({"quadratize", "x^10", "--format", "json"});
  REQUIRE(r.code == 0);
  ojson doc = ojson::parse(r.out);
  REQUIRE(doc["mode"] == "exact");
  REQUIRE(doc["input"]["poly"] == "x^10");
  const ojson& q = doc["result"]["quadratization"];
  REQUIRE(q["order"] == 1);
  REQUIRE(q["vars"] == ojson::array({"x^9"}));
  REQUIRE(q["rhs"] == ojson::array({"z1*x", "9z1^2"}));
  REQUIRE(doc["result"]["strategy"] == "one-var");
}

TEST_CASE("the one-variable test names the first offending coefficient") {
  RunResult r = run({"check-one-var", "x^5 + x^3", "--format", "json"});
  REQUIRE(r.code == 1);
  ojson doc = ojson::parse(r.out);
  REQUIRE(doc["result"]["accepted"] == false);
  REQUIRE(doc["result"]["reason"] == "shifted form has nonzero x^3 coefficient");

  RunResult t = run({"check-one-var", "x^5 + x^3"});
  REQUIRE(t.code == 1);
  REQUIRE(t.out.find("shifted form has nonzero x^3 coefficient") != std::string::npos);
}

TEST_CASE("search on a shifted power cross-references the one-variable route") {
  RunResult r = run({"search", "(x+1)^6"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("order: 3") != std::string::npos);
  REQUIRE(r.out.find("certificate (minimal within bounds)") != std::string::npos);
  REQUIRE(r.out.find("check-one-var") != std::string::npos);

  RunResult j = run({"search", "(x+1)^6", "--format", "json"});
  ojson doc = ojson::parse(j.out);
  REQUIRE(doc["result"]["found"] == true);
  REQUIRE(doc["result"]["label"] == "minimal within bounds");
  REQUIRE(doc["result"]["quadratization"]["order"] == 3);
  REQUIRE(doc["result"]["search"]["per_size"].is_array());
  bool has_note = false;
  for (const auto& d : doc["diagnostics"])
    has_note = has_note || d.get<std::string>().find("check-one-var") != std::string::npos;
  REQUIRE(has_note);
}

TEST_CASE("an exhausted search reports its certificate and exits nonzero") {
  RunResult r = run({"search", "(x+1)^6", "--max-order", "2", "--format", "json"});
  REQUIRE(r.code == 1);
  ojson doc = ojson::parse(r.out);
  REQUIRE(doc["result"]["found"] == false);
  REQUIRE(doc["result"]["label"] == "none within bounds");
  REQUIRE(doc["result"]["search"]["per_size"].size() >= 2);
}

TEST_CASE("verify reports the full system and discloses variable reduction") {
  RunResult r = run({"verify", "x^5 + x^4 + x^3 + x^2 + x + 1", "--vars", "x^4;x^3"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("verified: order 2") != std::string::npos);
  REQUIRE(r.out.find("z1' = ") != std::string::npos);
  REQUIRE(r.out.find("z2' = ") != std::string::npos);

  // a redundant entry is removed and the reduction is disclosed
  RunResult d = run({"verify", "x^3", "--vars", "x^2;2x^2", "--format", "json"});
  REQUIRE(d.code == 0);
  ojson doc = ojson::parse(d.out);
  REQUIRE(doc["result"]["verified"] == true);
  REQUIRE(doc["result"]["quadratization"]["order"] == 1);
  bool disclosed = false;
  for (const auto& diag : doc["diagnostics"])
    disclosed = disclosed || diag.get<std::string>().find("reduced") != std::string::npos;
  REQUIRE(disclosed);
}

TEST_CASE("the dash argument reads the polynomial from standard input") {
  RunResult r = run({"quadratize", "-", "--format", "json"}, "x^10\n");
  REQUIRE(r.code == 0);
  ojson doc = ojson::parse(r.out);
  REQUIRE(doc["result"]["quadratization"]["order"] == 1);
}

TEST_CASE("auto mode switches to float only when that lowers the order") {
  // leading coefficient 2 has no rational sixth root; the float construction
  // reaches order 2 while the exact search needs 3
  RunResult r = run({"quadratize", "2x^6 + x^4 + x^3 + x^2 + x + 1", "--format", "json"});
  REQUIRE(r.code == 0);
  ojson doc = ojson::parse(r.out);
  REQUIRE(doc["mode"] == "float");
  REQUIRE(doc["result"]["strategy"] == "degree6");
  REQUIRE(doc["result"]["quadratization"]["order"] == 2);
  bool disclosed = false;
  for (const auto& diag : doc["diagnostics"])
    disclosed = disclosed ||
                diag.get<std::string>().find("float mode lowers the order") != std::string::npos;
  REQUIRE(disclosed);

  // same radical obstruction, but the exact search already reaches order 2:
  // the result stays exact and the skip is still disclosed
  RunResult s = run({"quadratize", "2x^6 + x^3", "--format", "json"});
  REQUIRE(s.code == 0);
  ojson sdoc = ojson::parse(s.out);
  REQUIRE(sdoc["mode"] == "exact");
  REQUIRE(sdoc["result"]["quadratization"]["order"] == 2);
  bool noted = false;
  for (const auto& diag : sdoc["diagnostics"])
    noted = noted || diag.get<std::string>().find("sixth root") != std::string::npos;
  REQUIRE(noted);

  // forcing the strategy in auto mode retries in float and says so
  RunResult f = run({"quadratize", "2x^6 + x^3", "--strategy", "degree6", "--format", "json"});
  REQUIRE(f.code == 0);
  ojson fdoc = ojson::parse(f.out);
  REQUIRE(fdoc["mode"] == "float");
  REQUIRE(fdoc["result"]["quadratization"]["order"] == 2);
}

TEST_CASE("matrices output matches the frozen rendering") {
  std::ifstream golden(std::string(QUADRATIZE_TEST_DATA_DIR) + "/matrices_n5.txt");
  REQUIRE(golden.good());
  std::stringstream want;
  want << golden.rdbuf();

  RunResult r = run({"matrices"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out == want.str());

  RunResult j = run({"matrices", "--n", "6", "--format", "json"});
  REQUIRE(j.code == 0);
  ojson doc = ojson::parse(j.out);
  REQUIRE(doc["result"]["xdot"]["entries"].size() == 7);
  REQUIRE(doc["result"]["zdot"]["entries"].size() == 11);
}

TEST_CASE("eliminate lists the coefficient conditions") {
  RunResult r = run({"eliminate", "--format", "json"});
  REQUIRE(r.code == 0);
  ojson doc = ojson::parse(r.out);
  REQUIRE(doc["result"]["n"] == 5);
  REQUIRE(doc["result"]["conditions"] == ojson::array({"p3", "p0"}));

  RunResult t = run({"eliminate", "--n", "6"});
  REQUIRE(t.code == 0);
  REQUIRE(t.out.find("p4") != std::string::npos);
  REQUIRE(t.out.find("p3") != std::string::npos);
  REQUIRE(t.out.find("p0") != std::string::npos);
}

TEST_CASE("simulate reports drift and writes the optional trajectory table") {
  const std::string csv = "/tmp/quadratize_cli_traj_test.csv";
  std::remove(csv.c_str());
  RunResult r = run({"simulate", "x^3", "--x0", "0.3", "--T", "0.5", "--h", "0.001", "--csv", csv,
                     "--format", "json"});
  REQUIRE(r.code == 0);
  ojson doc = ojson::parse(r.out);
  REQUIRE(doc["result"]["order"] == 1);
  REQUIRE(doc["result"]["samples"] == 501);
  REQUIRE(doc["result"]["max_invariant_drift"].get<double>() < 1e-9);
  REQUIRE(doc["result"]["blew_up"] == false);
  REQUIRE(doc["result"]["blow_up_time"].is_null());

  std::ifstream f(csv);
  REQUIRE(f.good());
  std::string header;
  std::getline(f, header);
  REQUIRE(header == "t,x_re,x_im,xq_re,xq_im,z1_re,z1_im");
  size_t rows = 0;
  for (std::string line; std::getline(f, line);) ++rows;
  REQUIRE(rows == 501);
  std::remove(csv.c_str());
}

TEST_CASE("blow-up is reported as a result, not an error") {
  RunResult r = run({"simulate", "x^3 + x", "--x0", "0.5", "--T", "2", "--h", "0.001",
                     "--format", "json"});
  REQUIRE(r.code == 0);
  ojson doc = ojson::parse(r.out);
  REQUIRE(doc["result"]["blew_up"] == true);
  const double t = doc["result"]["blow_up_time"].get<double>();
  REQUIRE(t > 0.5);
  REQUIRE(t < 1.2);
}

TEST_CASE("help is printed on request and exits cleanly") {
  RunResult r = run({"--help"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("quadratize") != std::string::npos);
  RunResult s = run({"search", "--help"});
  REQUIRE(s.code == 0);
  REQUIRE(s.out.find("--max-degree") != std::string::npos);
}

TEST_CASE("float mode accepts exact syntax and reports float") {
  RunResult r = run({"quadratize", "x^3", "--mode", "float", "--format", "json"});
  REQUIRE(r.code == 0);
  ojson doc = ojson::parse(r.out);
  REQUIRE(doc["mode"] == "float");
  // decimal input in auto mode discloses the float decision
  RunResult d = run({"quadratize", "0.5x^3", "--format", "json"});
  REQUIRE(d.code == 0);
  ojson ddoc = ojson::parse(d.out);
  REQUIRE(ddoc["mode"] == "float");
  bool disclosed = false;
  for (const auto& diag : ddoc["diagnostics"])
    disclosed = disclosed ||
                diag.get<std::string>().find("float mode") != std::string::npos;
  REQUIRE(disclosed);
}
