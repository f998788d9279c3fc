#include <catch2/catch_amalgamated.hpp>

#include "gsynth/sexpr.hpp"

using namespace gsynth;

TEST_CASE("reader handles atoms, nesting and comments") {
  auto es = parse_sexprs("; header\n(a (b 12) #x1f) atom");
  REQUIRE(es.size() == 2);
  REQUIRE(es[0].is_list());
  REQUIRE(es[0].size() == 3);
  REQUIRE(es[0][0].is("a"));
  REQUIRE(es[0][1][1].is("12"));
  REQUIRE(es[0][2].is("#x1f"));
  REQUIRE(es[1].is("atom"));
}

TEST_CASE("reader reports positions") {
  auto es = parse_sexprs("(a\n  (b))");
  REQUIRE(es[0][1].line == 2);
  REQUIRE(es[0][1].col == 3);
}

TEST_CASE("truncated input is a parse error with a position") {
  try {
    parse_sexprs("(constraint (>= ");
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    REQUIRE(e.line == 1);
    REQUIRE(e.col == 13);
  }
}

TEST_CASE("unbalanced close is rejected") {
  REQUIRE_THROWS_AS(parse_sexprs("a))"), ParseError);
}

TEST_CASE("to_string round-trips structure") {
  auto es = parse_sexprs("(+ x (ite b 0 1))");
  REQUIRE(es[0].to_string() == "(+ x (ite b 0 1))");
}
