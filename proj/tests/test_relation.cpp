// Staged generic-point elimination: normal counts, stability, incompatibility.
#include "doctest.h"
#include "doa/examples.h"
#include "doa/involution.h"
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

SolveOutcome solve_natural(Problem& p) {
  Closure c = close_problem(p);
  REQUIRE(!has_error(c.diags));
  IndexOrdering ord = make_ordering(p, "natural");
  SolveOutcome s = solve_system(p, c, ord, 20260822ULL, 3);
  REQUIRE(s.ok);
  return s;
}

}  // namespace

TEST_CASE("riemann normal counts at low dimension") {
  {
    Problem p = make("riemann", {{"n", 2}});
    SolveOutcome s = solve_natural(p);
    CHECK(s.stages[0].fg_normals.size() == 1);
    CHECK(s.stages[1].fg_normals.size() == 2);
  }
  {
    Problem p = make("riemann", {{"n", 3}});
    SolveOutcome s = solve_natural(p);
    CHECK(s.stages[0].fg_normals.size() == 6);
    CHECK(s.stages[1].fg_normals.size() == 15);
    CHECK(s.stages[2].fg_normals.size() == 27);
  }
  {
    Problem p = make("riemann", {{"n", 4}});
    SolveOutcome s = solve_natural(p);
    CHECK(s.stages[0].fg_normals.size() == 20);
  }
}

TEST_CASE("ricci constraint removes the traced components") {
  Problem p = make("einstein", {{"n", 4}});
  SolveOutcome s = solve_natural(p);
  // 20 curvature components minus 10 trace rows leaves the Weyl count.
  CHECK(s.stages[0].fg_normals.size() == 10);
}

TEST_CASE("specified symbols sit in the background stage") {
  Problem p = make("scalar_kg", {{"n", 4}});
  SolveOutcome s = solve_natural(p);
  CHECK(!s.stages[0].bg_normals.empty());
  for (CompId c : s.stages[0].fg_normals) {
    CHECK(!p.comp_specified(c));
  }
}

TEST_CASE("repeated trials agree on ranks") {
  Problem p = make("riemann_torsion", {{"n", 3}});
  SolveOutcome s = solve_natural(p);
  CHECK(!s.trials_disagree);
}

TEST_CASE("contradictory branch constraints are incompatible") {
  std::string text = R"(problem clash

indices
  basic i size 2

coframe
  basic om[i]
  vertical w[i,i]

invariants
  symbol R[i,i,i,i] antisym(1,2) antisym(3,4) rotate(w)

structure
  d om[i] = - w[i,j] ^ om[j]
  d w[i,j] = - w[i,k] ^ w[k,j] + 1/2 R[i,j,k,l] om[k] ^ om[l]

constraints
  constraint branch one: R[2,1,2,1] = 1
  constraint branch two: R[2,1,2,1] = 2
)";
  ParseResult r = parse_spec(text);
  REQUIRE(r.ok);
  PipelineResult res = run_problem(r.spec, {});
  CHECK(res.exit_code == 3);
  CHECK(res.quality == "incompatible");
}

TEST_CASE("generic point values satisfy the installed rows") {
  Problem p = make("riemann", {{"n", 3}});
  Closure c = close_problem(p);
  IndexOrdering ord = make_ordering(p, "natural");
  SolveOutcome s = solve_system(p, c, ord, 99ULL, 1);
  REQUIRE(s.ok);
  for (const Relation& rel : c.relations) {
    auto v = eval_poly(rel.poly, s.values);
    if (v.has_value()) CHECK(*v == Rat(0));
  }
}
