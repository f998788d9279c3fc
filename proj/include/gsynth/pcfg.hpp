#pragma once

#include <cmath>
#include <vector>

#include "gsynth/grammar.hpp"

namespace gsynth {

/// Grammar with per-rule probabilities. `prob` is normalized per
/// nonterminal over all of its rules; `prob_terminal` over its
/// terminal-only rules (zero for every other rule).
struct ProbGrammar {
  Grammar grammar;
  std::vector<double> prob;
  std::vector<double> prob_terminal;
};

/// Upper bounds on the probability of any expression derivable from
/// each nonterminal; the fixed point used by the A* heuristic.
struct HeuristicTable {
  std::vector<double> h; // indexed by nonterminal
};

/// Smoothing transform w' = 10*((w+1)/10)^gamma. Strictly positive for
/// all w >= 0 and monotone in w.
inline double smooth_weight(double w, double gamma = 0.4) {
  return 10.0 * std::pow((w + 1.0) / 10.0, gamma);
}

inline WeightedGrammar smooth(const WeightedGrammar &wg, double gamma = 0.4) {
  WeightedGrammar out = wg;
  for (double &w : out.weights)
    w = smooth_weight(w, gamma);
  return out;
}

/// Normalizes weights into per-nonterminal probability distributions.
/// Throws DegenerateDistribution if a reachable nonterminal has zero
/// total weight (smooth first to avoid this).
inline ProbGrammar build_pcfg(const WeightedGrammar &wg) {
  const Grammar &g = wg.grammar;
  ProbGrammar pg;
  pg.prob.assign(g.num_rules(), 0.0);
  pg.prob_terminal.assign(g.num_rules(), 0.0);
  std::vector<bool> reach = g.reachable();
  for (size_t nt = 0; nt < g.num_nonterminals(); ++nt) {
    double total = 0.0, terminal_total = 0.0;
    for (int rid : g.rules_of(static_cast<int>(nt))) {
      total += wg.weights[rid];
      if (g.rule(rid).terminal_only)
        terminal_total += wg.weights[rid];
    }
    if (total <= 0.0) {
      if (reach[nt])
        throw DegenerateDistribution("nonterminal " + g.nonterminal(static_cast<int>(nt)).name +
                                     " has zero total weight");
      continue;
    }
    for (int rid : g.rules_of(static_cast<int>(nt))) {
      pg.prob[rid] = wg.weights[rid] / total;
      if (g.rule(rid).terminal_only && terminal_total > 0.0)
        pg.prob_terminal[rid] = wg.weights[rid] / terminal_total;
    }
  }
  pg.grammar = g;
  return pg;
}

/// Kleene iteration from h == 0 for
///   h(a) = max over rules a->b of P[a->b] * prod h(b_i).
/// The update is monotone and bounded by 1, so it converges; we stop at
/// max change < tol or after max_sweeps sweeps.
inline HeuristicTable heuristic_fixpoint(const ProbGrammar &pg, double tol = 1e-12,
                                         int max_sweeps = 10000) {
  const Grammar &g = pg.grammar;
  HeuristicTable table;
  table.h.assign(g.num_nonterminals(), 0.0);

  // Product of h over the holes of a pattern (with multiplicity).
  std::function<double(const TermPtr &)> hole_product = [&](const TermPtr &t) -> double {
    if (t->is_hole())
      return table.h[t->hole_nonterminal()];
    if (t->is_app()) {
      double p = 1.0;
      for (const TermPtr &a : t->args()) {
        p *= hole_product(a);
        if (p == 0.0)
          return 0.0;
      }
      return p;
    }
    return 1.0;
  };

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (size_t nt = 0; nt < g.num_nonterminals(); ++nt) {
      double best = 0.0;
      for (int rid : g.rules_of(static_cast<int>(nt))) {
        double v = pg.prob[rid];
        if (v == 0.0)
          continue;
        v *= hole_product(g.rule(rid).rhs);
        if (v > best)
          best = v;
      }
      max_change = std::max(max_change, std::abs(best - table.h[nt]));
      table.h[nt] = best;
    }
    if (max_change < tol)
      break;
  }
  return table;
}

} // namespace gsynth
