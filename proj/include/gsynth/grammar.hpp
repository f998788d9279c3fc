#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gsynth/term.hpp"

namespace gsynth {

struct Nonterminal {
  std::string name;
  Sort sort;
};

/// A production rule. The right-hand side is a term pattern whose holes
/// reference nonterminals; a rule is terminal-only when the pattern has
/// no holes.
struct Rule {
  int lhs = -1;
  TermPtr rhs;
  int id = -1;
  bool terminal_only = false;
};

/// Ordered sequence of rule ids forming a left-most derivation.
using Derivation = std::vector<int>;

class Grammar {
public:
  int add_nonterminal(std::string name, Sort sort) {
    nonterminals_.push_back({std::move(name), sort});
    rules_by_lhs_.emplace_back();
    return static_cast<int>(nonterminals_.size()) - 1;
  }

  int add_rule(int lhs, TermPtr rhs) {
    if (rhs->sort() != nonterminals_.at(lhs).sort)
      throw SortMismatch("rule for " + nonterminals_[lhs].name +
                         " produces sort " + rhs->sort().name());
    Rule r;
    r.lhs = lhs;
    r.rhs = std::move(rhs);
    r.id = static_cast<int>(rules_.size());
    r.terminal_only = r.rhs->is_complete();
    rules_by_lhs_[lhs].push_back(r.id);
    if (r.terminal_only)
      terminal_rules_.push_back(r.id);
    rules_.push_back(std::move(r));
    return rules_.back().id;
  }

  void set_start(int nt) { start_ = nt; }
  int start() const { return start_; }

  const std::vector<Nonterminal> &nonterminals() const { return nonterminals_; }
  const Nonterminal &nonterminal(int i) const { return nonterminals_.at(i); }
  size_t num_nonterminals() const { return nonterminals_.size(); }

  const std::vector<Rule> &rules() const { return rules_; }
  const Rule &rule(int id) const { return rules_.at(id); }
  size_t num_rules() const { return rules_.size(); }

  const std::vector<int> &rules_of(int nt) const { return rules_by_lhs_.at(nt); }
  const std::vector<int> &terminal_rules() const { return terminal_rules_; }

  std::optional<int> find_nonterminal(const std::string &name) const {
    for (size_t i = 0; i < nonterminals_.size(); ++i)
      if (nonterminals_[i].name == name)
        return static_cast<int>(i);
    return std::nullopt;
  }

  /// First nonterminal of the given sort, if any.
  std::optional<int> nonterminal_of_sort(const Sort &s) const {
    for (size_t i = 0; i < nonterminals_.size(); ++i)
      if (nonterminals_[i].sort == s)
        return static_cast<int>(i);
    return std::nullopt;
  }

  TermPtr start_hole() const {
    return Term::hole(start_, nonterminals_.at(start_).sort);
  }

  /// Nonterminals reachable from the start symbol.
  std::vector<bool> reachable() const {
    std::vector<bool> seen(nonterminals_.size(), false);
    std::vector<int> stack{start_};
    seen[start_] = true;
    while (!stack.empty()) {
      int nt = stack.back();
      stack.pop_back();
      for (int rid : rules_by_lhs_[nt])
        mark_holes(*rules_[rid].rhs, seen, stack);
    }
    return seen;
  }

  /// Variable names used as terminals anywhere in the rules.
  std::set<std::string> terminal_var_names() const {
    std::set<std::string> names;
    for (const Rule &r : rules_)
      r.rhs->collect_free_vars(names);
    return names;
  }

  /// Every nonterminal reachable from the start must have a rule.
  void validate() const {
    if (nonterminals_.empty())
      throw Error("grammar has no nonterminals");
    std::vector<bool> seen = reachable();
    for (size_t i = 0; i < nonterminals_.size(); ++i)
      if (seen[i] && rules_by_lhs_[i].empty())
        throw Error("nonterminal " + nonterminals_[i].name + " has no rules");
  }

  /// Rule pattern with holes shown as nonterminal names.
  std::string rhs_to_string(const Rule &r) const { return pattern_to_string(r.rhs); }

  std::string pattern_to_string(const TermPtr &t) const {
    if (t->is_hole())
      return nonterminals_.at(t->hole_nonterminal()).name;
    if (!t->is_app())
      return t->print();
    std::string out = "(" + t->op();
    for (const TermPtr &a : t->args())
      out += " " + pattern_to_string(a);
    return out + ")";
  }

  std::string rule_to_string(const Rule &r) const {
    return nonterminals_.at(r.lhs).name + " -> " + rhs_to_string(r);
  }

private:
  static void mark_holes(const Term &t, std::vector<bool> &seen, std::vector<int> &stack) {
    if (t.is_hole()) {
      int nt = t.hole_nonterminal();
      if (!seen.at(nt)) {
        seen[nt] = true;
        stack.push_back(nt);
      }
    } else if (t.is_app()) {
      for (const TermPtr &a : t.args())
        mark_holes(*a, seen, stack);
    }
  }

  std::vector<Nonterminal> nonterminals_;
  std::vector<Rule> rules_;
  std::vector<std::vector<int>> rules_by_lhs_;
  std::vector<int> terminal_rules_;
  int start_ = 0;
};

/// Grammar plus a nonnegative weight per rule.
struct WeightedGrammar {
  Grammar grammar;
  std::vector<double> weights; // indexed by rule id

  static WeightedGrammar all_ones(Grammar g) {
    WeightedGrammar wg;
    wg.weights.assign(g.num_rules(), 1.0);
    wg.grammar = std::move(g);
    return wg;
  }

  static WeightedGrammar zeros(Grammar g) {
    WeightedGrammar wg;
    wg.weights.assign(g.num_rules(), 0.0);
    wg.grammar = std::move(g);
    return wg;
  }
};

namespace detail {

/// Matches a rule right-hand side against a pattern, appending the
/// left-most sub-derivations for nested nonterminals. A hole in the
/// pattern only matches the identical hole in the rhs.
bool match_rhs(const Grammar &g, const TermPtr &rhs, const TermPtr &pat, Derivation &out);

inline bool derive_from(const Grammar &g, int nt, const TermPtr &pat, Derivation &out) {
  if (pat->is_hole() && pat->hole_nonterminal() == nt)
    return true; // the hole itself; zero derivation steps
  for (int rid : g.rules_of(nt)) {
    size_t mark = out.size();
    out.push_back(rid);
    if (match_rhs(g, g.rule(rid).rhs, pat, out))
      return true;
    out.resize(mark);
  }
  return false;
}

inline bool match_rhs(const Grammar &g, const TermPtr &rhs, const TermPtr &pat,
                      Derivation &out) {
  if (rhs->is_hole())
    return derive_from(g, rhs->hole_nonterminal(), pat, out);
  if (rhs->is_var())
    return pat->is_var() && pat->var_name() == rhs->var_name() && pat->sort() == rhs->sort();
  if (rhs->is_lit())
    return pat->is_lit() && pat->lit_value() == rhs->lit_value();
  // application
  if (!pat->is_app() || pat->op() != rhs->op() || pat->args().size() != rhs->args().size())
    return false;
  for (size_t i = 0; i < rhs->args().size(); ++i)
    if (!match_rhs(g, rhs->args()[i], pat->args()[i], out))
      return false;
  return true;
}

} // namespace detail

/// Left-most derivation of `t` from the start symbol. The grammar is
/// assumed unambiguous; the first matching rule (in rule order) wins.
inline Derivation leftmost_derivation(const Grammar &g, const TermPtr &t) {
  Derivation d;
  if (!detail::derive_from(g, g.start(), t, d))
    throw NotInLanguage("term not derivable from " +
                        g.nonterminal(g.start()).name + ": " + t->print());
  return d;
}

/// Replays a derivation from the start symbol, expanding the left-most
/// hole at each step. Inverse of leftmost_derivation.
inline TermPtr replay_derivation(const Grammar &g, const Derivation &d) {
  size_t pos = 0;
  // Recursive descent mirrors the left-most order used when deriving.
  std::function<TermPtr(const TermPtr &)> build = [&](const TermPtr &node) -> TermPtr {
    if (node->is_hole()) {
      if (pos >= d.size())
        return node; // partial derivation: hole survives
      int nt = node->hole_nonterminal();
      int rid = d[pos];
      if (g.rule(rid).lhs != nt)
        throw Error("derivation replay: rule " + std::to_string(rid) +
                    " does not apply to " + g.nonterminal(nt).name);
      ++pos;
      return build(g.rule(rid).rhs);
    }
    if (node->is_app()) {
      std::vector<TermPtr> new_args;
      new_args.reserve(node->args().size());
      for (const TermPtr &a : node->args())
        new_args.push_back(build(a));
      return Term::raw_app(node->op(), std::move(new_args), node->sort());
    }
    return node;
  };
  TermPtr result = build(g.start_hole());
  if (pos != d.size())
    throw Error("derivation replay: " + std::to_string(d.size() - pos) + " unused rules");
  return result;
}

/// Rule-occurrence counts over the left-most derivations of a set of
/// programs (Eq. 1 style counting). Programs outside the language are
/// skipped; `skipped`, when given, receives how many.
inline WeightedGrammar weights_from_programs(const Grammar &g,
                                             const std::vector<TermPtr> &programs,
                                             size_t *skipped = nullptr) {
  WeightedGrammar wg = WeightedGrammar::zeros(g);
  size_t skip_count = 0;
  for (const TermPtr &p : programs) {
    Derivation d;
    if (!detail::derive_from(wg.grammar, wg.grammar.start(), p, d)) {
      ++skip_count;
      continue;
    }
    for (int rid : d)
      wg.weights[rid] += 1.0;
  }
  if (skipped)
    *skipped = skip_count;
  return wg;
}

} // namespace gsynth
