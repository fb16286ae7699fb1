// Dense brute-force recounts against hand-written symmetry and relation rows.
//
// The rows below are enumerated directly over the raw index grid, without the
// engine's canonical representatives, so the two counts are independent.
#include <vector>

#include "doctest.h"
#include "doa/examples.h"
#include "doa/oracle.h"
#include "doa/parser.h"

using namespace doa;

namespace {

Problem make(const std::string& example, std::map<std::string, long> dims) {
  auto text = find_example(example);
  REQUIRE(text.has_value());
  ParseResult r = parse_spec(*text);
  REQUIRE(r.ok);
  Problem p = instantiate(r.spec, dims);
  REQUIRE(!has_error(p.diags));
  return p;
}

// Curvature-shaped symbol on n points: antisymmetric in each index pair.
OracleSymbol curvature(int n) {
  OracleSymbol s;
  s.name = "R";
  s.sizes = {n, n, n, n};
  GeneratorDecl g1;
  g1.antisym = true;
  g1.a = 1;
  g1.b = 2;
  GeneratorDecl g2;
  g2.antisym = true;
  g2.a = 3;
  g2.b = 4;
  s.generators = {g1, g2};
  return s;
}

// First Bianchi rows: cyclic sum over the last three slots, every raw tuple.
std::vector<std::vector<OracleTerm>> cyclic_rows(int n) {
  std::vector<std::vector<OracleTerm>> rows;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          std::vector<OracleTerm> row;
          row.push_back({0, {i, j, k, l}, Rat(1)});
          row.push_back({0, {i, k, l, j}, Rat(1)});
          row.push_back({0, {i, l, j, k}, Rat(1)});
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

}  // namespace

TEST_CASE("defining symmetries alone") {
  CHECK(brute_force_count({curvature(3)}, {}, 100000) == 9);
  CHECK(brute_force_count({curvature(4)}, {}, 100000) == 36);
}

TEST_CASE("cyclic rows cut the curvature count to the classical value") {
  CHECK(brute_force_count({curvature(2)}, cyclic_rows(2), 100000) == 1);
  CHECK(brute_force_count({curvature(3)}, cyclic_rows(3), 100000) == 6);
  CHECK(brute_force_count({curvature(4)}, cyclic_rows(4), 100000) == 20);
  CHECK(brute_force_count({curvature(5)}, cyclic_rows(5), 100000) == 50);
}

TEST_CASE("antisymmetric pair and symmetric pair counts") {
  OracleSymbol m;
  m.name = "M";
  m.sizes = {5, 5};
  GeneratorDecl g;
  g.antisym = true;
  g.a = 1;
  g.b = 2;
  m.generators = {g};
  CHECK(brute_force_count({m}, {}, 100000) == 10);
  OracleSymbol h = m;
  h.generators[0].antisym = false;
  CHECK(brute_force_count({h}, {}, 100000) == 15);
}

TEST_CASE("empty symbol list counts zero") {
  CHECK(brute_force_count({}, {}, 100000) == 0);
}

TEST_CASE("budget overflow is flagged, not computed") {
  CHECK(brute_force_count({curvature(10)}, {}, 100) == -1);
}

TEST_CASE("dense recount matches the engine on curvature") {
  for (long n : {3L, 4L}) {
    CAPTURE(n);
    Problem p = make("riemann", {{"n", n}});
    Closure c = close_problem(p);
    REQUIRE(!has_error(c.diags));
    IndexOrdering ord = make_ordering(p, "natural");
    SolveOutcome s = solve_system(p, c, ord, 20260822ULL, 3);
    REQUIRE(s.ok);
    for (int order = 0; order <= 1; ++order) {
      long long dense = dense_normal_count(p, c, s, order, 2000000);
      REQUIRE(dense >= 0);
      CHECK(dense ==
            (long long)s.stages[std::size_t(order)].fg_normals.size());
    }
  }
}

TEST_CASE("cross check passes on a clean run") {
  auto text = find_example("riemann");
  REQUIRE(text.has_value());
  ParseResult r = parse_spec(*text);
  REQUIRE(r.ok);
  PipelineOptions opts;
  opts.dims["n"] = 4;
  PipelineResult res = run_problem(r.spec, opts);
  REQUIRE(res.ok);
  CrossCheck cc = cross_check(res, 2000000);
  CHECK(cc.disagreements.empty());
}

TEST_CASE("cross check catches a tampered character table") {
  auto text = find_example("riemann");
  REQUIRE(text.has_value());
  ParseResult r = parse_spec(*text);
  REQUIRE(r.ok);
  PipelineOptions opts;
  opts.dims["n"] = 3;
  PipelineResult res = run_problem(r.spec, opts);
  REQUIRE(res.ok);
  res.chars.degree += 1;
  CrossCheck cc = cross_check(res, 2000000);
  CHECK(!cc.disagreements.empty());
}
