#include <catch2/catch_amalgamated.hpp>

#include "gsynth/pcfg.hpp"
#include "test_util.hpp"

using namespace gsynth;
using namespace gsynth::test;

TEST_CASE("uniform weights normalize to uniform probabilities") {
  SynthProblem p = load_benchmark("max3.sl");
  WeightedGrammar wg = WeightedGrammar::all_ones(p.grammar);
  ProbGrammar pg = build_pcfg(wg);
  for (int rid : pg.grammar.rules_of(0))
    CHECK(pg.prob[rid] == Catch::Approx(0.25));
  CHECK(pg.prob[4] == Catch::Approx(1.0));
}

TEST_CASE("worked-example weights normalize per nonterminal") {
  SynthProblem p = load_benchmark("max3.sl");
  WeightedGrammar wg = weights_from_programs(p.grammar, {program1_body()});
  ProbGrammar pg = build_pcfg(wg);
  CHECK(pg.prob[0] == Catch::Approx(3.0 / 13.0));
  CHECK(pg.prob[1] == Catch::Approx(3.0 / 13.0));
  CHECK(pg.prob[2] == Catch::Approx(3.0 / 13.0));
  CHECK(pg.prob[3] == Catch::Approx(4.0 / 13.0));
  // Distributions sum to one per nonterminal.
  for (size_t nt = 0; nt < pg.grammar.num_nonterminals(); ++nt) {
    double sum = 0;
    for (int rid : pg.grammar.rules_of(static_cast<int>(nt)))
      sum += pg.prob[rid];
    CHECK(sum == Catch::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("zero-weight rules get zero probability without smoothing") {
  Grammar g;
  int s = g.add_nonterminal("S", Sort::integer());
  g.set_start(s);
  g.add_rule(s, Term::var("x", Sort::integer()));
  g.add_rule(s, Term::int_lit(0));
  WeightedGrammar wg = WeightedGrammar::zeros(g);
  wg.weights[0] = 2.0;
  ProbGrammar pg = build_pcfg(wg);
  CHECK(pg.prob[0] == 1.0);
  CHECK(pg.prob[1] == 0.0);
  CHECK(pg.prob_terminal[1] == 0.0);
}

TEST_CASE("all-zero reachable nonterminal is degenerate") {
  SynthProblem p = load_benchmark("max3.sl");
  WeightedGrammar wg = WeightedGrammar::zeros(p.grammar);
  REQUIRE_THROWS_AS(build_pcfg(wg), DegenerateDistribution);
  // Smoothing repairs it.
  REQUIRE_NOTHROW(build_pcfg(smooth(wg)));
}

TEST_CASE("terminal distribution normalizes over terminal rules only") {
  SynthProblem p = load_benchmark("max3.sl");
  WeightedGrammar wg = weights_from_programs(p.grammar, {program1_body()});
  ProbGrammar pg = build_pcfg(wg);
  CHECK(pg.prob_terminal[0] == 0.0); // ite rule is not terminal-only
  CHECK(pg.prob_terminal[1] == Catch::Approx(3.0 / 10.0));
  CHECK(pg.prob_terminal[3] == Catch::Approx(4.0 / 10.0));
}

TEST_CASE("smoothing formula matches high-precision reference values") {
  // 10*((w+1)/10)^0.4 evaluated independently (mpmath, 50 digits).
  CHECK(smooth_weight(9.0) == Catch::Approx(10.0).margin(1e-12));
  CHECK(smooth_weight(3.0) == Catch::Approx(6.9314484315514639).margin(1e-9));
  CHECK(smooth_weight(0.0) == Catch::Approx(3.9810717055349725).margin(1e-9));
}

TEST_CASE("smoothing is monotone and strictly positive") {
  std::mt19937_64 rng(3);
  double prev = smooth_weight(0.0);
  CHECK(prev > 0.0);
  for (double w = 0.25; w < 60.0; w += 0.25) {
    double s = smooth_weight(w);
    CHECK(s > prev);
    prev = s;
  }
}

TEST_CASE("pCFG after smoothing sums to one with all-positive mass") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Grammar g = random_grammar(rng);
    WeightedGrammar wg = WeightedGrammar::zeros(g);
    for (double &w : wg.weights)
      w = (rng() % 5 == 0) ? 0.0 : static_cast<double>(rng() % 10);
    ProbGrammar pg = build_pcfg(smooth(wg));
    for (size_t nt = 0; nt < g.num_nonterminals(); ++nt) {
      double sum = 0;
      for (int rid : g.rules_of(static_cast<int>(nt))) {
        CHECK(pg.prob[rid] > 0.0);
        sum += pg.prob[rid];
      }
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("heuristic of a single deterministic terminal rule is one") {
  Grammar g;
  int s = g.add_nonterminal("S", Sort::integer());
  g.set_start(s);
  g.add_rule(s, Term::var("x", Sort::integer()));
  ProbGrammar pg = build_pcfg(WeightedGrammar::all_ones(g));
  HeuristicTable h = heuristic_fixpoint(pg);
  CHECK(h.h[0] == Catch::Approx(1.0));
}

TEST_CASE("heuristic takes the max over rules") {
  Grammar g;
  int s = g.add_nonterminal("S", Sort::integer());
  g.set_start(s);
  g.add_rule(s, Term::var("x", Sort::integer()));
  g.add_rule(s, Term::var("y", Sort::integer()));
  WeightedGrammar wg = WeightedGrammar::zeros(g);
  wg.weights = {0.6, 0.4};
  HeuristicTable h = heuristic_fixpoint(build_pcfg(wg));
  CHECK(h.h[0] == Catch::Approx(0.6));
}

namespace {
// Independent fixed-point iterator working on flattened hole lists
// rather than patterns; written separately as an oracle.
std::vector<double> heuristic_oracle(const ProbGrammar &pg) {
  const Grammar &g = pg.grammar;
  std::vector<std::vector<std::vector<int>>> holes(g.num_rules() ? g.num_nonterminals() : 0);
  for (size_t nt = 0; nt < g.num_nonterminals(); ++nt) {
    for (int rid : g.rules_of(static_cast<int>(nt))) {
      std::vector<int> hs;
      std::function<void(const TermPtr &)> walk = [&](const TermPtr &t) {
        if (t->is_hole())
          hs.push_back(t->hole_nonterminal());
        else if (t->is_app())
          for (const TermPtr &a : t->args())
            walk(a);
      };
      walk(g.rule(rid).rhs);
      holes[nt].push_back(std::move(hs));
    }
  }
  std::vector<double> h(g.num_nonterminals(), 0.0);
  for (int sweep = 0; sweep < 100000; ++sweep) {
    double change = 0.0;
    for (size_t nt = 0; nt < g.num_nonterminals(); ++nt) {
      double best = 0.0;
      const auto &rids = g.rules_of(static_cast<int>(nt));
      for (size_t k = 0; k < rids.size(); ++k) {
        double v = pg.prob[rids[k]];
        for (int hnt : holes[nt][k])
          v *= h[hnt];
        best = std::max(best, v);
      }
      change = std::max(change, std::abs(best - h[nt]));
      h[nt] = best;
    }
    if (change < 1e-15)
      break;
  }
  return h;
}
} // namespace

TEST_CASE("heuristic matches an independent fixed-point iterator") {
  SynthProblem p = load_benchmark("max3_nogrammar.sl");
  WeightedGrammar wg = smooth(weights_from_programs(p.grammar, {program1_body()}));
  ProbGrammar pg = build_pcfg(wg);
  HeuristicTable h = heuristic_fixpoint(pg);
  std::vector<double> expect = heuristic_oracle(pg);
  REQUIRE(h.h.size() == expect.size());
  for (size_t i = 0; i < expect.size(); ++i)
    CHECK(h.h[i] == Catch::Approx(expect[i]).margin(1e-9));
}

TEST_CASE("heuristic is a fixed point of the max-product update") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    Grammar g = random_grammar(rng);
    WeightedGrammar wg = WeightedGrammar::zeros(g);
    for (double &w : wg.weights)
      w = static_cast<double>(rng() % 7);
    ProbGrammar pg = build_pcfg(smooth(wg));
    HeuristicTable t = heuristic_fixpoint(pg);
    for (size_t nt = 0; nt < g.num_nonterminals(); ++nt) {
      CHECK(t.h[nt] >= 0.0);
      CHECK(t.h[nt] <= 1.0);
      for (int rid : g.rules_of(static_cast<int>(nt))) {
        double v = pg.prob[rid];
        std::function<void(const TermPtr &)> walk = [&](const TermPtr &x) {
          if (x->is_hole())
            v *= t.h[x->hole_nonterminal()];
          else if (x->is_app())
            for (const TermPtr &a : x->args())
              walk(a);
        };
        walk(g.rule(rid).rhs);
        CHECK(t.h[nt] >= v - 1e-9);
      }
    }
  }
}
