#include <catch2/catch_amalgamated.hpp>

#include "gsynth/augment.hpp"
#include "gsynth/grammar.hpp"
#include "test_util.hpp"

using namespace gsynth;
using namespace gsynth::test;

// Rule ids in max3.sl follow the paper's numbering: r1..r5 are ids 0..4.
namespace {
constexpr int R_ITE = 0, R_VR0 = 1, R_VR1 = 2, R_VR2 = 3, R_GE = 4;
}

TEST_CASE("left-most derivation of the worked example has the reported counts") {
  SynthProblem p = load_benchmark("max3.sl");
  Derivation d = leftmost_derivation(p.grammar, program1_body());
  std::map<int, int> counts;
  for (int rid : d)
    counts[rid]++;
  CHECK(counts[R_ITE] == 3);
  CHECK(counts[R_VR0] == 3);
  CHECK(counts[R_VR1] == 3);
  CHECK(counts[R_VR2] == 4);
  CHECK(counts[R_GE] == 3);
  CHECK(d.size() == 16);
  // First step expands Start, left-most order afterwards.
  CHECK(d[0] == R_ITE);
  CHECK(d[1] == R_GE);
}

TEST_CASE("single-rule derivation") {
  SynthProblem p = load_benchmark("max3.sl");
  Derivation d = leftmost_derivation(p.grammar, Term::var("vr0", Sort::integer()));
  REQUIRE(d == Derivation{R_VR0});
}

TEST_CASE("terms outside the language are rejected") {
  SynthProblem p = load_benchmark("max3.sl");
  TermPtr t = Term::app("+", {Term::var("vr0", Sort::integer()),
                              Term::var("vr1", Sort::integer())});
  REQUIRE_THROWS_AS(leftmost_derivation(p.grammar, t), NotInLanguage);
}

TEST_CASE("replaying a derivation reproduces the term") {
  SynthProblem p = load_benchmark("max3.sl");
  TermPtr body = program1_body();
  Derivation d = leftmost_derivation(p.grammar, body);
  CHECK(term_eq(replay_derivation(p.grammar, d), body));
}

TEST_CASE("derive/replay round-trip on random grammars") {
  std::mt19937_64 rng(7);
  auto uniform = [&]() { return (rng() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 30; ++trial) {
    Grammar g = random_grammar(rng);
    // Sample a random complete term by expanding holes, biased to leaves.
    std::function<TermPtr(int, int)> sample = [&](int nt, int depth) -> TermPtr {
      const auto &rids = g.rules_of(nt);
      std::vector<int> pool;
      for (int rid : rids)
        if (depth < 6 || g.rule(rid).terminal_only)
          pool.push_back(rid);
      if (pool.empty())
        pool.assign(rids.begin(), rids.end());
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
    TermPtr t = sample(g.start(), 0);
    if (!t->is_complete())
      continue;
    Derivation d = leftmost_derivation(g, t);
    CHECK(term_eq(replay_derivation(g, d), t));
  }
}

TEST_CASE("weights from the worked example") {
  SynthProblem p = load_benchmark("max3.sl");
  WeightedGrammar wg = weights_from_programs(p.grammar, {program1_body()});
  CHECK(wg.weights == std::vector<double>{3, 3, 3, 4, 3});
}

TEST_CASE("weights of the empty program set are all zero") {
  SynthProblem p = load_benchmark("max3.sl");
  WeightedGrammar wg = weights_from_programs(p.grammar, {});
  for (double w : wg.weights)
    CHECK(w == 0.0);
}

TEST_CASE("weight counting is additive over multisets") {
  SynthProblem p = load_benchmark("max3.sl");
  TermPtr v0 = Term::var("vr0", Sort::integer());
  WeightedGrammar wg = weights_from_programs(p.grammar, {v0, v0});
  CHECK(wg.weights[R_VR0] == 2.0);

  std::vector<TermPtr> a{program1_body(), v0};
  std::vector<TermPtr> b{program1_swapped_body(), v0, v0};
  std::vector<TermPtr> both = a;
  both.insert(both.end(), b.begin(), b.end());
  WeightedGrammar wa = weights_from_programs(p.grammar, a);
  WeightedGrammar wb = weights_from_programs(p.grammar, b);
  WeightedGrammar wab = weights_from_programs(p.grammar, both);
  for (size_t i = 0; i < wab.weights.size(); ++i)
    CHECK(wab.weights[i] == wa.weights[i] + wb.weights[i]);
}

TEST_CASE("programs outside the language are skipped with a count") {
  SynthProblem p = load_benchmark("max3.sl");
  TermPtr bad = Term::app("+", {Term::var("vr0", Sort::integer()), Term::int_lit(1)});
  size_t skipped = 0;
  WeightedGrammar wg = weights_from_programs(p.grammar, {bad, program1_body()}, &skipped);
  CHECK(skipped == 1);
  CHECK(wg.weights[R_ITE] == 3.0);
}

TEST_CASE("augment inlines a helper against sort-matching nonterminals") {
  SynthProblem p = load_benchmark("max3.sl");
  WeightedGrammar wg = weights_from_programs(p.grammar, {program1_body()});
  Sort I = Sort::integer();
  DefinedFunction max2{
      "max2",
      {{"a", I}, {"b", I}},
      I,
      Term::app("ite", {Term::app(">", {Term::var("a", I), Term::var("b", I)}),
                        Term::var("a", I), Term::var("b", I)})};
  WeightedGrammar out = augment(wg, max2);
  REQUIRE(out.grammar.num_rules() == 6);
  const Rule &added = out.grammar.rule(5);
  CHECK(out.grammar.rule_to_string(added) == "Start -> (ite (> Start Start) Start Start)");
  // Mean of the Start weights {3,3,3,4}.
  CHECK(out.weights[5] == Catch::Approx(3.25));
  // Existing weights untouched.
  for (int i = 0; i < 5; ++i)
    CHECK(out.weights[i] == wg.weights[i]);
}

TEST_CASE("helpers referencing unknown variables are discarded") {
  SynthProblem p = load_benchmark("max3.sl");
  WeightedGrammar wg = WeightedGrammar::all_ones(p.grammar);
  Sort I = Sort::integer();
  DefinedFunction bad{"h", {}, I, Term::var("vr9", I)};
  REQUIRE_THROWS_AS(augment(wg, bad), DiscardedHelper);
}

TEST_CASE("augment keeps previously derivable terms derivable") {
  SynthProblem p = load_benchmark("max3.sl");
  WeightedGrammar wg = WeightedGrammar::all_ones(p.grammar);
  Sort I = Sort::integer();
  DefinedFunction helper{"h", {{"a", I}}, I,
                         Term::app("ite", {Term::bool_lit(true), Term::var("a", I),
                                           Term::int_lit(0)})};
  WeightedGrammar out = augment(wg, helper);
  Derivation before = leftmost_derivation(p.grammar, program1_body());
  Derivation after = leftmost_derivation(out.grammar, program1_body());
  CHECK(before == after);
}

TEST_CASE("duplicate helper rules are not re-added") {
  SynthProblem p = load_benchmark("max3.sl");
  WeightedGrammar wg = WeightedGrammar::all_ones(p.grammar);
  Sort I = Sort::integer();
  DefinedFunction id{"id", {{"a", I}}, I, Term::var("a", I)};
  WeightedGrammar once = augment(wg, id);
  WeightedGrammar twice = augment(once, id);
  CHECK(once.grammar.num_rules() == twice.grammar.num_rules());
}

TEST_CASE("weight-count update adds the worked-example counts to all-ones") {
  SynthProblem p = load_benchmark("max3.sl");
  WeightedGrammar wg = WeightedGrammar::all_ones(p.grammar);
  WeightedGrammar out = apply_weight_counts(wg, {program1_body()});
  CHECK(out.weights == std::vector<double>{4, 4, 4, 5, 4});
}

TEST_CASE("weight-count update ignores empty and underivable input") {
  SynthProblem p = load_benchmark("max3.sl");
  WeightedGrammar wg = WeightedGrammar::all_ones(p.grammar);
  CHECK(apply_weight_counts(wg, {}).weights == wg.weights);
  // An operator the grammar lacks at every level contributes nothing.
  TermPtr alien = Term::app("+", {Term::int_lit(2), Term::int_lit(2)});
  CHECK(apply_weight_counts(wg, {alien}).weights == wg.weights);
}

TEST_CASE("weight-count update counts maximal derivable fragments only") {
  SynthProblem p = load_benchmark("max3.sl");
  WeightedGrammar wg = WeightedGrammar::all_ones(p.grammar);
  // (+ vr0 vr1) is not derivable, but both children are.
  TermPtr t = Term::app("+", {Term::var("vr0", Sort::integer()),
                              Term::var("vr1", Sort::integer())});
  WeightedGrammar out = apply_weight_counts(wg, {t});
  CHECK(out.weights == std::vector<double>{1, 2, 2, 1, 1});
}
