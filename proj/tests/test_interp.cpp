#include <catch2/catch_amalgamated.hpp>

#include "gsynth/eval.hpp"
#include "test_util.hpp"

using namespace gsynth;
using namespace gsynth::test;

namespace {
std::map<std::string, Value> vals(long long a, long long b, long long c) {
  return {{"vr0", Value(BigInt(a))}, {"vr1", Value(BigInt(b))}, {"vr2", Value(BigInt(c))}};
}
} // namespace

TEST_CASE("arithmetic evaluation") {
  CHECK(eval(Term::app("+", {Term::int_lit(1), Term::int_lit(2)}), {}).as_int() == 3);
  CHECK(eval(Term::app("-", {Term::int_lit(1)}), {}).as_int() == -1);
  CHECK(eval(Term::app("-", {Term::int_lit(10), Term::int_lit(3), Term::int_lit(2)}), {})
            .as_int() == 5);
  CHECK(eval(Term::app("*", {Term::int_lit(6), Term::int_lit(7)}), {}).as_int() == 42);
}

TEST_CASE("large intermediates do not overflow") {
  TermPtr big = Term::int_lit(1);
  for (int i = 0; i < 10; ++i)
    big = Term::app("*", {big, Term::int_lit(1000000)});
  CHECK(eval(big, {}).as_int() == BigInt("1" + std::string(60, '0')));
}

TEST_CASE("the worked-example body computes the maximum") {
  TermPtr body = program1_body();
  CHECK(eval(body, vals(1, 5, 3)).as_int() == 5);
  CHECK(eval(body, vals(9, 5, 3)).as_int() == 9);
  CHECK(eval(body, vals(1, 2, 7)).as_int() == 7);
}

TEST_CASE("bit-vector arithmetic is modular") {
  auto bv = [](uint64_t b) { return Term::bv_lit(8, b); };
  CHECK(eval(Term::app("bvadd", {bv(0x0F), bv(0x01)}), {}).as_bv() == BvVal(8, 0x10));
  CHECK(eval(Term::app("bvadd", {bv(0xFF), bv(0x01)}), {}).as_bv() == BvVal(8, 0x00));
  CHECK(eval(Term::app("bvsub", {bv(0x00), bv(0x01)}), {}).as_bv() == BvVal(8, 0xFF));
  CHECK(eval(Term::app("bvneg", {bv(0x01)}), {}).as_bv() == BvVal(8, 0xFF));
  CHECK(eval(Term::app("bvashr", {bv(0x80), bv(0x01)}), {}).as_bv() == BvVal(8, 0xC0));
  CHECK(eval(Term::app("bvshl", {bv(0x01), bv(0x09)}), {}).as_bv() == BvVal(8, 0x00));
  CHECK(eval(Term::app("bvult", {bv(0x7F), bv(0x80)}), {}).as_bool());
}

TEST_CASE("unbound variables and sort mismatches are reported") {
  TermPtr t = Term::var("vr0", Sort::integer());
  REQUIRE_THROWS_AS(eval(t, {}), UnboundVariable);
  std::map<std::string, Value> wrong{{"vr0", Value(true)}};
  REQUIRE_THROWS_AS(eval(t, wrong), SortMismatch);
}

TEST_CASE("check_cex accepts a correct candidate") {
  SynthProblem p = load_benchmark("max3.sl");
  std::vector<Counterexample> cexs{{vals(0, 0, 0)}, {vals(3, 1, 2)}, {vals(-5, -1, -9)}};
  CHECK(check_cex(program1(), p, cexs));
}

TEST_CASE("check_cex is vacuously true without counterexamples") {
  SynthProblem p = load_benchmark("max3.sl");
  DefinedFunction bogus = program1();
  bogus.body = Term::var("vr0", Sort::integer());
  CHECK(check_cex(bogus, p, {}));
}

TEST_CASE("check_cex rejects a projection on a separating input") {
  SynthProblem p = load_benchmark("max3.sl");
  DefinedFunction proj = program1();
  proj.body = Term::var("vr0", Sort::integer());
  // Violates (>= (fn ...) vr1) since 0 >= 1 fails.
  CHECK_FALSE(check_cex(proj, p, {{vals(0, 1, 0)}}));
}

TEST_CASE("check_cex is monotone in the counterexample set") {
  SynthProblem p = load_benchmark("max3.sl");
  std::mt19937_64 rng(23);
  auto rnd = [&]() { return static_cast<long long>(rng() % 21) - 10; };
  DefinedFunction cands[3] = {program1(), program1(), program1()};
  cands[1].body = Term::var("vr1", Sort::integer());
  cands[2].body = program1_swapped_body();
  for (const DefinedFunction &cand : cands) {
    std::vector<Counterexample> cexs;
    bool ok = check_cex(cand, p, cexs);
    for (int i = 0; i < 40; ++i) {
      cexs.push_back({vals(rnd(), rnd(), rnd())});
      bool now = check_cex(cand, p, cexs);
      CHECK((ok || !now)); // once false, never true again
      ok = now;
    }
  }
}
