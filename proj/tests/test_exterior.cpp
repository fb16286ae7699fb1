// Structure equations and the relation closure built from them.
#include <algorithm>

#include "doctest.h"
#include "doa/examples.h"
#include "doa/parser.h"
#include "doa/relation_engine.h"

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

int max_order_in(const Problem& p, const Poly& poly) {
  int best = -1;
  for (const auto& t : poly.terms) {
    for (CompId f : t.factors) best = std::max(best, p.comps.order_of(f));
  }
  return best;
}

}  // namespace

TEST_CASE("riemann closure includes both Bianchi families") {
  Problem p = make("riemann", {{"n", 3}});
  Closure c = close_problem(p);
  REQUIRE(!has_error(c.diags));
  bool first = false, second = false;
  for (const Relation& r : c.relations) {
    if (r.kind != RelKind::kBianchi) continue;
    int o = max_order_in(p, r.poly);
    first = first || o == 0;
    second = second || o == 1;
  }
  CHECK(first);
  CHECK(second);
}

TEST_CASE("derivation exchange relations appear at the order budget") {
  Problem p = make("riemann", {{"n", 3}});
  Closure c = close_problem(p);
  bool generic = std::any_of(c.relations.begin(), c.relations.end(),
                             [](const Relation& r) {
                               return r.kind == RelKind::kGeneric;
                             });
  CHECK(generic);
}

TEST_CASE("frame derivative sweep extends declared relations") {
  Problem p = make("newton_rigid_gravity_free", {{"n", 4}});
  Closure c = close_problem(p);
  REQUIRE(!has_error(c.diags));
  bool swept = std::any_of(c.relations.begin(), c.relations.end(),
                           [](const Relation& r) {
                             return r.kind == RelKind::kDerived;
                           });
  CHECK(swept);
}

TEST_CASE("constraint relations carry their constraint index") {
  Problem p = make("einstein", {{"n", 4}});
  Closure c = close_problem(p);
  bool tagged = std::any_of(c.relations.begin(), c.relations.end(),
                            [](const Relation& r) {
                              return r.kind == RelKind::kConstraint &&
                                     r.constraint_idx == 0;
                            });
  CHECK(tagged);
  REQUIRE(p.constraints.size() == 1);
  CHECK(p.constraints[0].tag == "eom");
  CHECK(p.constraints[0].name == "ricci");
}

TEST_CASE("closure deduplicates repeated rows") {
  Problem p = make("riemann", {{"n", 2}});
  Closure c = close_problem(p);
  std::vector<std::string> prints;
  for (const Relation& r : c.relations) {
    prints.push_back(p.poly_display(r.poly));
  }
  std::sort(prints.begin(), prints.end());
  CHECK(std::adjacent_find(prints.begin(), prints.end()) == prints.end());
}
