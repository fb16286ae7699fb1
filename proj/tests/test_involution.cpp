// Seed extraction, ordering search and the full pipeline on known problems.
#include <algorithm>

#include "doctest.h"
#include "doa/examples.h"
#include "doa/involution.h"
#include "doa/parser.h"

using namespace doa;

namespace {

ProblemSpec load(const std::string& example) {
  auto text = find_example(example);
  REQUIRE(text.has_value());
  ParseResult r = parse_spec(*text);
  REQUIRE(r.ok);
  return r.spec;
}

PipelineResult run(const std::string& example, long n,
                   PipelineOptions opts = {}) {
  ProblemSpec spec = load(example);
  if (n > 0) opts.dims["n"] = n;
  return run_problem(spec, opts);
}

}  // namespace

TEST_CASE("riemann degrees across dimensions") {
  for (long n = 2; n <= 5; ++n) {
    CAPTURE(n);
    PipelineResult res = run("riemann", n);
    REQUIRE(res.ok);
    CHECK(res.exit_code == 0);
    CHECK(res.quality == "exact");
    CHECK(res.chars.degree == n * (n - 1) / 2);
    CHECK(res.chars.dimension == int(n));
    CHECK(res.chars.cartan_ok);
    CHECK(res.residues_ok);
    CHECK(res.covering.ok);
  }
}

TEST_CASE("characters are invariant across accepted orderings") {
  PipelineOptions base;
  PipelineResult a = run("riemann", 3, base);
  PipelineOptions rev;
  rev.ordering_hint = "reversed";
  PipelineResult b = run("riemann", 3, rev);
  REQUIRE(a.ok);
  REQUIRE(b.ok);
  CHECK(b.search.selected.name == "reversed");
  CHECK(a.chars.degree == b.chars.degree);
  CHECK(a.chars.dimension == b.chars.dimension);
}

TEST_CASE("prolongation keeps the top character") {
  PipelineOptions deep;
  deep.seed_order_override = 2;
  deep.max_order_override = 3;
  PipelineResult res = run("riemann", 3, deep);
  REQUIRE(res.ok);
  CHECK(res.chars.degree == 3);
  CHECK(res.chars.dimension == 3);
  CHECK(res.chars.cartan_ok);
}

TEST_CASE("newton rigid motion fixes the ordering and the degree") {
  PipelineResult res = run("newton_rigid_gravity_fixed", 4);
  REQUIRE(res.ok);
  CHECK(res.exit_code == 0);
  CHECK(res.chars.degree == 6);
  CHECK(res.chars.dimension == 1);
  CHECK(res.search.selected.name == "special_smallest");
  // Evolution covers exactly the spatial directions.
  REQUIRE(res.chars.evolution.size() == 3);
  for (const auto& d : res.chars.evolution) CHECK(d != "0");
  bool saw_greatest_failure = false;
  for (const auto& cand : res.search.candidates) {
    if (cand.ordering.name == "special_greatest") {
      CHECK(!cand.accepted);
      CHECK(cand.failure_kind == "O1");
      saw_greatest_failure = true;
    }
  }
  CHECK(saw_greatest_failure);
}

TEST_CASE("free gravity adds one degree at full dimension") {
  PipelineResult res = run("newton_rigid_gravity_free", 4);
  REQUIRE(res.ok);
  CHECK(res.chars.degree == 1);
  CHECK(res.chars.dimension == 4);
  CHECK(res.search.selected.name == "special_smallest");
}

TEST_CASE("relativistic rigid flow picks the opposite ordering") {
  PipelineResult res = run("rel_rigid_flow_free", 4);
  REQUIRE(res.ok);
  CHECK(res.chars.degree == 3);
  CHECK(res.chars.dimension == 4);
  CHECK(res.search.selected.name == "special_greatest");
}

TEST_CASE("specified spacetime empties the seed set") {
  PipelineResult res = run("rel_rigid_flow_specified", 4);
  REQUIRE(res.ok);
  CHECK(res.chars.degree == 0);
  CHECK(res.search.seeds.seeds.empty());
  bool noted = std::any_of(res.notes.begin(), res.notes.end(),
                           [](const std::string& s) {
                             return s.find("empty") != std::string::npos;
                           });
  CHECK(noted);
}

TEST_CASE("minkowski branch drops to dimension one") {
  PipelineResult res = run("rel_rigid_flow_minkowski", 4);
  REQUIRE(res.ok);
  CHECK(res.chars.degree == 3);
  CHECK(res.chars.dimension == 1);
}

TEST_CASE("equations of motion move one direction out of evolution") {
  PipelineResult res = run("scalar_kg", 4);
  REQUIRE(res.ok);
  CHECK(res.has_eom);
  CHECK(res.chars.degree == 2);
  CHECK(res.chars.dimension == 3);
  CHECK(res.eom_dimension_drop_ok);
  CHECK(res.eom_new_direction_ok);
  REQUIRE(res.dof.has_value());
  CHECK(*res.dof == 1);
}

TEST_CASE("pure group structure reports its symmetry dimension") {
  PipelineResult res = run("maurer_cartan_so3", 0);
  CHECK(res.exit_code == 2);
  CHECK(res.cond_r.symmetry_dimension == 3);
}

TEST_CASE("constant sector upgrade keeps the product exact") {
  PipelineResult res = run("mc_product", 4);
  REQUIRE(res.ok);
  CHECK(res.exit_code == 0);
  CHECK(res.quality == "exact");
  CHECK(res.cond_r.upgraded);
  CHECK(res.chars.degree == 6);
  CHECK(res.chars.dimension == 4);
}

TEST_CASE("cyclic ordering demands are reported as a conflict") {
  PipelineResult res = run("conflict_pair", 0);
  CHECK(res.exit_code == 2);
  CHECK(res.quality == "advisory");
  CHECK(res.search.conflict);
  CHECK(res.search.conflict_note.find("precedence") != std::string::npos);
}

TEST_CASE("constraints never raise the degree pair") {
  PipelineResult free_run = run("riemann", 4);
  PipelineResult con_run = run("einstein", 4);
  REQUIRE(free_run.ok);
  REQUIRE(con_run.ok);
  auto lex = [](const PipelineResult& r) {
    return std::pair<int, int>(r.chars.dimension, r.chars.degree);
  };
  CHECK(lex(con_run) <= lex(free_run));
}
