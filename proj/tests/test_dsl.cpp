// Parsing, validation and canonical serialization of .doa descriptions.
#include <string>

#include "doctest.h"
#include "doa/examples.h"
#include "doa/parser.h"

using namespace doa;

namespace {

const char* kMini = R"(# toy
problem toy

indices
  basic i size n

coframe
  basic om[i]
  vertical w[i,i]

invariants
  symbol R[i,i,i,i] antisym(1,2) antisym(3,4) rotate(w)

structure
  d om[i] = - w[i,j] ^ om[j]
  d w[i,j] = - w[i,k] ^ w[k,j] + 1/2 R[i,j,k,l] om[k] ^ om[l]

options
  dims n 2 6
  default n 4
)";

}  // namespace

TEST_CASE("parser accepts a minimal problem") {
  ParseResult r = parse_spec(kMini);
  REQUIRE(r.ok);
  CHECK(r.spec.name == "toy");
  CHECK(r.spec.classes.size() == 1);
  CHECK(r.spec.coframe.size() == 2);
  CHECK(r.spec.symbols.size() == 1);
  CHECK(r.spec.structure.size() == 2);
  CHECK(validate_spec(r.spec).empty());
}

TEST_CASE("serialization round-trips to an equal tree") {
  ParseResult first = parse_spec(kMini);
  REQUIRE(first.ok);
  std::string text = serialize_spec(first.spec);
  ParseResult second = parse_spec(text);
  REQUIRE(second.ok);
  CHECK(first.spec == second.spec);
  CHECK(serialize_spec(second.spec) == text);
}

TEST_CASE("all bundled examples parse, validate and round-trip") {
  const auto& all = bundled_examples();
  CHECK(all.size() == 15);
  for (const auto& ex : all) {
    CAPTURE(ex.name);
    ParseResult r = parse_spec(ex.text);
    REQUIRE(r.ok);
    CHECK(r.spec.name == ex.name);
    CHECK(validate_spec(r.spec).empty());
    ParseResult again = parse_spec(serialize_spec(r.spec));
    REQUIRE(again.ok);
    CHECK(r.spec == again.spec);
  }
}

TEST_CASE("family aliases resolve to default variants") {
  auto fixed = find_example("newton_rigid");
  auto direct = find_example("newton_rigid_gravity_fixed");
  REQUIRE(fixed.has_value());
  REQUIRE(direct.has_value());
  CHECK(*fixed == *direct);
  auto flow = find_example("rel_rigid_flow");
  auto free = find_example("rel_rigid_flow_free");
  REQUIRE(flow.has_value());
  CHECK(*flow == *free);
  CHECK(!find_example("no_such_example").has_value());
}

TEST_CASE("mixed summation counts are rejected") {
  std::string bad = R"(problem bad

indices
  basic i size n

coframe
  basic om[i]
  vertical w[i,i]

invariants
  symbol A[i,i] rotate(w)
  symbol B[i] rotate(w)

structure
  d om[i] = - w[i,j] ^ om[j]
  d w[i,j] = 0

relations
  relation broken: A[i,k] B[k] = B[i] B[k]
)";
  ParseResult r = parse_spec(bad);
  CHECK(!r.ok);
}

TEST_CASE("sections out of order are rejected") {
  std::string bad = R"(problem bad

coframe
  basic om[i]

indices
  basic i size n
)";
  ParseResult r = parse_spec(bad);
  CHECK(!r.ok);
}

TEST_CASE("unknown names are caught by validation") {
  std::string text = R"(problem bad

indices
  basic i size n

coframe
  basic om[i]
  vertical w[i,i]

invariants
  symbol R[i,i,i,i] antisym(1,2) antisym(3,4) rotate(nope)

structure
  d om[i] = - w[i,j] ^ om[j]
  d w[i,j] = 0
)";
  ParseResult r = parse_spec(text);
  REQUIRE(r.ok);
  CHECK(!validate_spec(r.spec).empty());
}

TEST_CASE("example listing has one line per family") {
  auto lines = example_listing();
  REQUIRE(lines.size() == 8);
  CHECK(lines[0].rfind("riemann:", 0) == 0);
  CHECK(lines[6].rfind("newton_rigid", 0) == 0);
  CHECK(lines[7].rfind("rel_rigid_flow", 0) == 0);
}
