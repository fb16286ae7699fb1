// Canonical component references: orbit representatives, signs, zero orbits.
#include "doctest.h"
#include "doa/examples.h"
#include "doa/parser.h"
#include "doa/problem.h"

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

}  // namespace

TEST_CASE("riemann components canonicalize with signs") {
  Problem p = make("riemann", {{"n", 4}});
  int R = p.symbol_index("R");
  REQUIRE(R >= 0);
  // Class values are 0-based ids; displays are 1-based.
  auto a = p.comp_ref(R, {0, 1, 2, 3}, {});
  auto b = p.comp_ref(R, {1, 0, 3, 2}, {});
  auto c = p.comp_ref(R, {1, 0, 2, 3}, {});
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  REQUIRE(c.has_value());
  CHECK(a->second == b->second);
  CHECK(a->second == c->second);
  CHECK(a->first == b->first);
  CHECK(a->first == -c->first);
  CHECK(!p.comp_ref(R, {0, 0, 2, 3}, {}).has_value());
  CHECK(!p.comp_ref(R, {0, 1, 3, 3}, {}).has_value());
}

TEST_CASE("derivation indices form a multiset") {
  Problem p = make("riemann", {{"n", 3}});
  int R = p.symbol_index("R");
  auto a = p.comp_ref(R, {1, 0, 1, 0}, {0, 2});
  auto b = p.comp_ref(R, {1, 0, 1, 0}, {2, 0});
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK(a->second == b->second);
  CHECK(a->first == b->first);
  const CompKey& key = p.comps.key(a->second);
  CHECK(key.derivs.size() == 2);
  CHECK(p.comps.order_of(a->second) == 2);
}

TEST_CASE("two transpositions close to the full signed group") {
  Problem p = make("maurer_cartan_so3", {});
  int C = p.symbol_index("C");
  REQUIRE(C >= 0);
  // C[3,2,1] = -1 makes C the epsilon tensor on displays 1..3.
  CHECK(p.constant_value(C, {2, 1, 0}) == Rat(-1));
  CHECK(p.constant_value(C, {0, 1, 2}) == Rat(1));
  CHECK(p.constant_value(C, {1, 2, 0}) == Rat(1));
  CHECK(p.constant_value(C, {1, 0, 2}) == Rat(-1));
  CHECK(p.constant_value(C, {0, 0, 2}) == Rat(0));
}

TEST_CASE("component displays use declared value names") {
  Problem p = make("riemann", {{"n", 4}});
  int R = p.symbol_index("R");
  auto a = p.comp_ref(R, {1, 0, 3, 2}, {0});
  REQUIRE(a.has_value());
  CHECK(p.comp_display(a->second) == "R[2,1,4,3;1]");
}

TEST_CASE("newton problem keeps the special direction distinct") {
  Problem p = make("newton_rigid_gravity_fixed", {{"n", 4}});
  REQUIRE(p.derivation_values.size() == 4);
  // The special value is declared first and displays as 0.
  CHECK(p.value_display(p.derivation_values[0]) == "0");
  CHECK(p.value_display(p.derivation_values[1]) == "1");
  int M = p.symbol_index("M");
  auto m0 = p.comp_ref(M, {2, 1}, {p.derivation_values[0]});
  REQUIRE(m0.has_value());
  CHECK(p.comp_display(m0->second) == "M[2,1;0]");
}
