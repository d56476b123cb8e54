#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "recurlab/config.hpp"
#include "recurlab/error.hpp"
#include "recurlab/runner.hpp"

using namespace recur;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("recurlab-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::string& args) {
  const int rc = std::system((std::string(RECURLAB_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

ConfigError parse_error(const std::string& text) {
  try {
    RunConfig::parse(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("config parsed without error");
  return ConfigError("unreachable");
}

}  // namespace

TEST_CASE("section parsing") {
  const auto s = parse_sections("# comment\n[run]\nseed = 3\n\n[experiment a]\nvector = v1\nvector = v2\n");
  REQUIRE(s.size() == 2);
  CHECK(s[0].kind == "run");
  CHECK(s[1].name == "a");
  CHECK(s[1].all("vector").size() == 2);
  CHECK(s[1].find("vector")->value == "v2");
  CHECK(s[1].find("vector")->line == 7);
}

TEST_CASE("precision settings") {
  CHECK(Precision::parse("exact").exact);
  const auto f = Precision::parse("float:8");
  CHECK_FALSE(f.exact);
  CHECK(f.digits == 8);
  CHECK(f.to_string() == "float:8");
  CHECK_THROWS_AS(Precision::parse("float:40"), ConfigError);
}

TEST_CASE("config errors carry line and column") {
  const auto e = parse_error("[experiment x]\noperator = matrix([[1, 2], [3, 4]\nvector = vec(sparse: 1:1)\nhorizon = 10\n");
  CHECK(e.line() == 2);
  CHECK(e.column() > 11);

  CHECK(parse_error("[experiment x]\noperator = blockcycle\nvector = vec(sparse: 1:1)\nhorizon = 0\n").line() == 4);
  CHECK(parse_error("[experiment x]\noperator = blockcycle\nvector = vec(sparse: 1:1)\nhorizon = 5\nbogus = 1\n").line() == 5);
  CHECK(parse_error("[experiment x]\noperator = blockcycle\nvector = vec(sparse: 1:1)\nhorizon = 5\nepsilons = 0\n").line() == 5);
  CHECK(parse_error("[check a]\nkind = kronecker\nlambdas = i\nepsilon = 1\nhorizon = 10\n[check a]\nkind = kronecker\n"
                    "lambdas = i\nepsilon = 1\nhorizon = 10\n")
            .line() == 6);
  CHECK(parse_error("[check a]\nkind = telepathy\n").line() == 2);
}

TEST_CASE("empty config gives a summary only") {
  const auto out = scratch("empty");
  const auto summary = run(RunConfig::parse("[run]\nseed = 1\n"), RunOptions{out, 1, {}, {}});
  CHECK(summary.rows.empty());
  CHECK_FALSE(summary.any_failure());
  CHECK(slurp(out / "summary.tsv") == "kind\tsuite\tname\tstatus\tdetail\n");
  fs::remove_all(out);
}

TEST_CASE("a failing experiment is isolated") {
  const auto out = scratch("isolation");
  const auto cfg = RunConfig::parse(
      "[experiment broken]\noperator = shift(weights=1/(n-3), side=uni, space=l1)\nvector = vec(sparse: 5:1)\n"
      "horizon = 10\n"
      "[experiment fine]\noperator = blockcycle\nvector = vec(sparse: 5:1)\nepsilons = 1/10\nhorizon = 100\n"
      "[check k]\nkind = kronecker\nlambdas = i\nepsilon = 1\nhorizon = 10000\n");
  const auto s = run(cfg, RunOptions{out, 2, {}, {}});
  REQUIRE(s.rows.size() == 3);
  CHECK(s.rows[0].status == "Failed");
  CHECK(s.rows[1].status == "Done");
  CHECK(s.rows[1].detail == "v0=Periodic(4)");
  CHECK(s.rows[2].status == "Pass");
  CHECK(s.rows[2].detail.find("max_gap=4") != std::string::npos);
  CHECK(slurp(out / "experiments/fine/v0/verdict.txt").find("label=Periodic(4)") != std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("describe reports constructions") {
  CHECK(describe_literal("blockcycle").find("every e_k is periodic") != std::string::npos);
  const auto rot = describe_literal("matrix([[0,-1],[1,0]])");
  CHECK(rot.find("criterion: recurrent") != std::string::npos);
  CHECK(rot.find("(alg 1, geo 1)") != std::string::npos);
  CHECK(describe_literal("shift(weights=(n+1)/n, side=uni)").find("weight family (n+1)/n") != std::string::npos);
  CHECK_THROWS_AS(describe_literal("matrix([[0,-1],[1,0]"), ConfigError);
}

TEST_CASE("command line exit codes") {
  const auto out = scratch("cli");
  CHECK(cli("run " + std::string(RECURLAB_EXAMPLE_CONFIG) + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "summary.tsv"));
  CHECK(slurp(out / "experiments/blockcycle_e5/v0/verdict.txt").find("Periodic(4)") != std::string::npos);
  CHECK(cli("describe blockcycle") == 0);
  CHECK(cli("describe 'matrix([[1,'") == 2);
  CHECK(cli("run /nonexistent/config.cfg --out " + out.string()) == 2);
  CHECK(cli("frobnicate") == 2);

  const auto bad = out / "failing.cfg";
  std::ofstream(bad) << "[check wrong]\nkind = shift_series\nweights = 2\nset = intervals([1, inf])\nhorizon = 200\n"
                        "expect = Diverging\n";
  CHECK(cli("run " + bad.string() + " --out " + (out / "f").string()) == 1);
  fs::remove_all(out);
}
