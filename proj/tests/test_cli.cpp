// Command-line behavior: formats, determinism, scanning, verification.
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "doa/cli.h"
#include "json.hpp"

using namespace doa;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("run prints the classical curvature answer") {
  CliRun r = cli({"run", "--example", "riemann", "--dim", "n=4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("degree of arbitrariness: 6") != std::string::npos);
  CHECK(r.out.find("dimension of evolution: 4") != std::string::npos);
}

TEST_CASE("json reports are byte-stable for a fixed seed") {
  std::vector<std::string> args = {"run",   "--example", "riemann",
                                   "--dim", "n=3",       "--format", "json"};
  CliRun a = cli(args);
  CliRun b = cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  auto j = nlohmann::json::parse(a.out);
  CHECK(j["schema"] == "doa-report/1");
  CHECK(j["spec"] == "riemann");
  CHECK(j["degree"] == 3);
  CHECK(j["dimension"] == 3);
  CHECK(j["status"] == "exact");
  CHECK(j["exit_code"] == 0);
  CHECK(j.contains("rng_seed"));
  CHECK(j["cartan"]["ok"] == true);
  CliRun c = cli({"run", "--example", "riemann", "--dim", "n=3", "--format",
                  "json", "--rng-seed", "7"});
  auto jc = nlohmann::json::parse(c.out);
  CHECK(jc["rng_seed"] == 7);
  CHECK(jc["degree"] == 3);
}

TEST_CASE("list flag prints exactly the eight families") {
  CliRun r = cli({"--list-examples"});
  CHECK(r.code == 0);
  CHECK(count_lines(r.out) == 8);
  CHECK(r.out.find("riemann:") != std::string::npos);
  CHECK(r.out.find("yang_mills_einstein:") != std::string::npos);
  CliRun sub = cli({"examples"});
  CHECK(sub.out == r.out);
}

TEST_CASE("scan fits the einstein degree polynomial") {
  CliRun r = cli({"scan", "--example", "einstein", "--var", "n", "--from", "4",
                  "--to", "7"});
  CHECK(r.code == 0);
  CHECK(r.out.find("degree(n) = n^2 - 3*n") != std::string::npos);
  CHECK(r.out.find("dimension(n) = n - 1") != std::string::npos);
}

TEST_CASE("scan emits machine-readable results on request") {
  CliRun r = cli({"scan", "--example", "riemann", "--var", "n", "--from", "2",
                  "--to", "5", "--format", "json"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == "doa-scan/1");
  REQUIRE(j["results"].size() == 4);
  CHECK(j["results"][2]["degree"] == 6);
  CHECK(j["degree_fit"] == "1/2*n^2 - 1/2*n");
}

TEST_CASE("verify agrees with the oracle on bundled examples") {
  CliRun r = cli({"verify", "--example", "riemann", "--dim", "n=3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("verify: ok") != std::string::npos);
}

TEST_CASE("spec files load from disk") {
  std::string path = std::string(DOA_SPEC_DIR) + "/riemann.doa";
  CliRun r = cli({"run", "--spec", path, "--dim", "n=3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("degree of arbitrariness: 3") != std::string::npos);
}

TEST_CASE("usage errors exit with status one") {
  CHECK(cli({"run", "--example", "riemann", "--format", "yaml"}).code == 1);
  CHECK(cli({"run", "--no-such-flag"}).code == 1);
  CHECK(cli({"run", "--example", "no_such_example"}).code == 1);
  CHECK(cli({"run", "--example", "riemann", "--dim", "nonsense"}).code == 1);
}

TEST_CASE("parse failures are reported with the offending line") {
  std::string path = "/tmp/doa_broken_spec.doa";
  {
    std::ofstream f(path);
    f << "problem broken\n\nindices\n  basic i size\n";
  }
  CliRun r = cli({"run", "--spec", path});
  CHECK(r.code == 1);
  CHECK(!r.err.empty());
}

TEST_CASE("exit codes separate the upper bound and conflict cases") {
  CHECK(cli({"run", "--example", "gauge", "--dim", "n=4"}).code == 2);
  CHECK(cli({"run", "--example", "conflict_pair"}).code == 2);
  CHECK(cli({"run", "--example", "maurer_cartan_so3"}).code == 2);
}

TEST_CASE("polynomial formatting") {
  CHECK(polynomial_string({Rat(0), Rat(-3), Rat(1)}, "n") == "n^2 - 3*n");
  CHECK(polynomial_string({Rat(2)}, "n") == "2");
  CHECK(polynomial_string({Rat(-1), Rat(1, 2)}, "n") == "1/2*n - 1");
  CHECK(polynomial_string({}, "n") == "0");
  auto fit = lagrange_fit({{2, 1}, {3, 6}, {4, 20}, {5, 50}, {6, 105}});
  REQUIRE(fit.size() == 5);
  CHECK(fit[4] == Rat(1, 12));
  CHECK(fit[2] == Rat(-1, 12));
}
