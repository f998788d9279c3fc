#pragma once

#include "gsynth/problem.hpp"

namespace gsynth {

/// Inlines a defined function into a grammar pattern: each formal
/// parameter becomes a hole for the (first) nonterminal of its sort.
/// Remaining free variables must be terminals the grammar already uses.
/// Throws DiscardedHelper when the helper cannot be made well-formed.
inline TermPtr inline_helper_pattern(const Grammar &g, const DefinedFunction &helper) {
  if (!helper.body)
    throw DiscardedHelper("helper '" + helper.name + "' has no body");
  std::map<std::string, TermPtr> subst;
  for (const Param &p : helper.params) {
    auto nt = g.nonterminal_of_sort(p.sort);
    if (!nt)
      throw DiscardedHelper("no nonterminal of sort " + p.sort.name() +
                            " for parameter '" + p.name + "'");
    subst[p.name] = Term::hole(*nt, p.sort);
  }
  std::set<std::string> known = g.terminal_var_names();
  for (const std::string &v : helper.body->free_vars()) {
    if (subst.count(v) || known.count(v))
      continue;
    throw DiscardedHelper("helper '" + helper.name + "' references undefined variable '" +
                          v + "'");
  }
  return helper.body->substitute(subst);
}

/// Adds the inlined helper as a new production for every nonterminal
/// whose sort matches the helper's return sort. Each new rule's weight
/// is the mean of the nonterminal's current rule weights; duplicates of
/// existing rules are not re-added (R is a set).
inline WeightedGrammar augment(const WeightedGrammar &wg, const DefinedFunction &helper) {
  TermPtr pattern = inline_helper_pattern(wg.grammar, helper); // throws DiscardedHelper
  WeightedGrammar out = wg;
  for (size_t nt = 0; nt < out.grammar.num_nonterminals(); ++nt) {
    if (out.grammar.nonterminal(static_cast<int>(nt)).sort != helper.ret)
      continue;
    bool duplicate = false;
    for (int rid : out.grammar.rules_of(static_cast<int>(nt)))
      if (term_eq(out.grammar.rule(rid).rhs, pattern)) {
        duplicate = true;
        break;
      }
    if (duplicate)
      continue;
    double sum = 0.0;
    size_t n = out.grammar.rules_of(static_cast<int>(nt)).size();
    for (int rid : out.grammar.rules_of(static_cast<int>(nt)))
      sum += out.weights[rid];
    out.grammar.add_rule(static_cast<int>(nt), pattern);
    out.weights.push_back(n > 0 ? sum / static_cast<double>(n) : 1.0);
  }
  return out;
}

namespace detail {

/// Adds Eq.-1 counts for the maximal derivable fragments of a pattern:
/// try the whole subtree from a sort-matching nonterminal first, and
/// only descend into children when the subtree is not derivable.
inline void count_fragments(const Grammar &g, const TermPtr &pat, std::vector<double> &counts) {
  for (size_t nt = 0; nt < g.num_nonterminals(); ++nt) {
    if (g.nonterminal(static_cast<int>(nt)).sort != pat->sort())
      continue;
    Derivation d;
    if (derive_from(g, static_cast<int>(nt), pat, d)) {
      for (int rid : d)
        counts[rid] += 1.0;
      return;
    }
  }
  if (pat->is_app())
    for (const TermPtr &a : pat->args())
      count_fragments(g, a, counts);
}

} // namespace detail

/// Bumps existing rule weights by the Eq.-1 rule counts over the
/// derivable fragments of each pattern (helper bodies with formals
/// already inlined as holes, or plain ground programs).
inline WeightedGrammar apply_weight_counts(const WeightedGrammar &wg,
                                           const std::vector<TermPtr> &patterns) {
  WeightedGrammar out = wg;
  for (const TermPtr &p : patterns)
    detail::count_fragments(out.grammar, p, out.weights);
  return out;
}

} // namespace gsynth
