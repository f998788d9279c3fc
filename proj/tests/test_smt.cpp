#include <catch2/catch_amalgamated.hpp>

#include "gsynth/solver_discovery.hpp"
#include "test_util.hpp"

using namespace gsynth;
using namespace gsynth::test;

namespace {
SolverConfig solver_config() {
  auto cmd = discover_solver_command(test_dir());
  if (cmd.empty()) {
    FAIL("no SMT solver available: install z3, or run npm install in tools/z3-wasm, "
         "or set GSYNTH_SOLVER");
  }
  SolverConfig cfg;
  cfg.command = cmd;
  return cfg;
}
} // namespace

TEST_CASE("the worked-example program verifies valid") {
  SmtSolver solver(solver_config());
  SynthProblem p = load_benchmark("max3.sl");
  Verdict v = solver.verify(program1(), p);
  CHECK(v.valid());
}

TEST_CASE("a projection is invalid with a separating model") {
  SmtSolver solver(solver_config());
  SynthProblem p = load_benchmark("max3.sl");
  DefinedFunction proj = program1();
  proj.body = Term::var("vr0", Sort::integer());
  Verdict v = solver.verify(proj, p);
  REQUIRE(v.invalid());
  // The counterexample covers all universals and actually separates.
  REQUIRE(v.cex.valuation.size() == 3);
  CHECK_FALSE(check_cex(proj, p, {v.cex}));
}

TEST_CASE("zero constraints verify valid for any candidate") {
  SmtSolver solver(solver_config());
  SynthProblem p = parse_problem("(set-logic LIA)(synth-fun f ((x Int)) Int)(check-synth)");
  DefinedFunction cand{"f", {{"x", Sort::integer()}}, Sort::integer(), Term::int_lit(3)};
  CHECK(solver.verify(cand, p).valid());
}

TEST_CASE("ground constraints reduce to tautology checking") {
  SmtSolver solver(solver_config());
  DefinedFunction dummy{"f", {}, Sort::integer(), Term::int_lit(0)};
  SynthProblem taut = parse_problem(R"(
    (set-logic LIA)
    (synth-fun f () Int)
    (declare-var a Int)
    (constraint (or (>= a 0) (< a 1)))
    (check-synth))");
  CHECK(solver.verify(dummy, taut).valid());
  SynthProblem not_taut = parse_problem(R"(
    (set-logic LIA)
    (synth-fun f () Int)
    (declare-var a Int)
    (constraint (>= a 0))
    (check-synth))");
  CHECK(solver.verify(dummy, not_taut).invalid());
}

TEST_CASE("bit-vector problems verify") {
  SmtSolver solver(solver_config());
  SynthProblem p = load_benchmark("bv8_inc.sl");
  Sort bv8 = Sort::bitvec(8);
  DefinedFunction good{"f", {{"x", bv8}}, bv8,
                       Term::app("bvadd", {Term::var("x", bv8), Term::bv_lit(8, 1)})};
  CHECK(solver.verify(good, p).valid());
  DefinedFunction bad{"f", {{"x", bv8}}, bv8, Term::var("x", bv8)};
  Verdict v = solver.verify(bad, p);
  REQUIRE(v.invalid());
  CHECK(v.cex.valuation.count("x"));
  CHECK(v.cex.valuation.at("x").is_bv());
}

TEST_CASE("a crashing solver is reported") {
  SolverConfig cfg;
  cfg.command = {"false"};
  SmtSolver solver(cfg);
  SynthProblem p = load_benchmark("max3.sl");
  REQUIRE_THROWS_AS(solver.verify(program1(), p), SolverCrashed);
}

TEST_CASE("a hung solver hits the per-query timeout") {
  SolverConfig cfg;
  cfg.command = {"sleep", "30"};
  cfg.query_timeout_s = 0.3;
  SmtSolver solver(cfg);
  SynthProblem p = load_benchmark("max3.sl");
  Verdict v = solver.verify(program1(), p);
  CHECK(v.kind == Verdict::Unknown);
}

TEST_CASE("garbage output is a protocol error") {
  SolverConfig cfg;
  cfg.command = {"echo", "zzz-not-a-result"};
  SmtSolver solver(cfg);
  SynthProblem p = load_benchmark("max3.sl");
  REQUIRE_THROWS_AS(solver.verify(program1(), p), ProtocolError);
}

TEST_CASE("interpreter agrees with solver evaluation on random LIA terms") {
  SmtSolver solver(solver_config());
  SynthProblem p = load_benchmark("max3_nogrammar.sl");
  std::mt19937_64 rng(41);
  auto uniform = [&]() { return (rng() >> 11) * 0x1.0p-53; };

  // Sample random complete terms from the full LIA grammar and random
  // valuations; substitute to get ground terms for the solver.
  std::function<TermPtr(int, int)> sample = [&](int nt, int depth) -> TermPtr {
    const Grammar &g = p.grammar;
    const auto &rids = g.rules_of(nt);
    std::vector<int> pool;
    for (int rid : rids)
      if (depth < 4 || g.rule(rid).terminal_only)
        pool.push_back(rid);
    int rid = pool[static_cast<size_t>(uniform() * pool.size())];
    std::function<TermPtr(const TermPtr &)> fill = [&](const TermPtr &t) -> TermPtr {
      if (t->is_hole())
        return sample(t->hole_nonterminal(), depth + 1);
      if (t->is_app()) {
        std::vector<TermPtr> args;
        for (const TermPtr &a : t->args())
          args.push_back(fill(a));
        return Term::raw_app(t->op(), std::move(args), t->sort());
      }
      return t;
    };
    return fill(g.rule(rid).rhs);
  };

  std::vector<TermPtr> ground;
  std::vector<Value> mine;
  for (int i = 0; i < 100; ++i) {
    TermPtr t = sample(p.grammar.start(), 0);
    std::map<std::string, Value> val;
    std::map<std::string, TermPtr> subst;
    for (const Param &u : p.universals) {
      long long x = static_cast<long long>(rng() % 41) - 20;
      val[u.name] = Value(BigInt(x));
      subst[u.name] = Term::int_lit(x);
    }
    mine.push_back(eval(t, val));
    ground.push_back(t->substitute(subst));
  }
  std::vector<Value> theirs = solver.eval_terms(ground);
  REQUIRE(theirs.size() == mine.size());
  for (size_t i = 0; i < mine.size(); ++i)
    CHECK(mine[i] == theirs[i]);
}
