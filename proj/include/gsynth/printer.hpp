#pragma once

#include "gsynth/problem.hpp"

namespace gsynth {

inline std::string print_term(const TermPtr &t, Dialect d = Dialect::Smtlib) {
  return t->print(d);
}

/// The benchmark text block used at the head of the solving prompts:
/// set-logic, declare-var lines, constraints, check-synth. Matches the
/// shape of the paper's prompts (no synth-fun command; the signature is
/// quoted separately inside the instruction text).
inline std::string prompt_problem_text(const SynthProblem &p) {
  std::string out = "(set-logic " +
                    std::string(p.logic == Logic::Bv ? "BV" : "LIA") + ")\n";
  for (const Param &u : p.universals)
    out += "(declare-var " + u.name + " " + u.sort.name() + ")\n";
  for (const TermPtr &c : p.constraints)
    out += "(constraint " + c->print() + ")\n";
  out += "(check-synth)";
  return out;
}

inline std::string constraints_text(const SynthProblem &p) {
  std::string out;
  for (size_t i = 0; i < p.constraints.size(); ++i) {
    if (i > 0)
      out += '\n';
    out += "(constraint " + p.constraints[i]->print() + ")";
  }
  return out;
}

/// Full SyGuS serialization, grammar included. Mostly for debugging and
/// round-trip tests.
inline std::string problem_to_text(const SynthProblem &p) {
  std::string out = "(set-logic " +
                    std::string(p.logic == Logic::Bv ? "BV" : "LIA") + ")\n";
  out += "(synth-fun " + p.target.name + " (";
  for (size_t i = 0; i < p.target.params.size(); ++i) {
    if (i > 0)
      out += ' ';
    out += "(" + p.target.params[i].name + " " + p.target.params[i].sort.name() + ")";
  }
  out += ") " + p.target.ret.name();
  const Grammar &g = p.grammar;
  if (g.num_nonterminals() > 0) {
    out += "\n    (";
    for (size_t i = 0; i < g.num_nonterminals(); ++i) {
      if (i > 0)
        out += ' ';
      out += "(" + g.nonterminal(static_cast<int>(i)).name + " " +
             g.nonterminal(static_cast<int>(i)).sort.name() + ")";
    }
    out += ")\n    (";
    for (size_t i = 0; i < g.num_nonterminals(); ++i) {
      if (i > 0)
        out += "\n     ";
      const Nonterminal &nt = g.nonterminal(static_cast<int>(i));
      out += "(" + nt.name + " " + nt.sort.name() + " (";
      const auto &rids = g.rules_of(static_cast<int>(i));
      for (size_t j = 0; j < rids.size(); ++j) {
        if (j > 0)
          out += ' ';
        out += g.rhs_to_string(g.rule(rids[j]));
      }
      out += "))";
    }
    out += ")";
  }
  out += ")\n";
  for (const Param &u : p.universals)
    out += "(declare-var " + u.name + " " + u.sort.name() + ")\n";
  for (const TermPtr &c : p.constraints)
    out += "(constraint " + c->print() + ")\n";
  out += "(check-synth)\n";
  return out;
}

} // namespace gsynth
