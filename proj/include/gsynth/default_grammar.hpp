#pragma once

#include <algorithm>

#include "gsynth/problem.hpp"

namespace gsynth {

/// Full-theory grammar for a target signature: one nonterminal per sort
/// in play, terminal rules for every parameter plus the theory's
/// constants, and operator rules covering the theory's operator set.
inline Grammar default_grammar(Logic logic, const std::vector<Param> &params, Sort ret) {
  Grammar g;
  if (logic == Logic::Lia || logic == Logic::LiaInv) {
    for (const Param &p : params)
      if (!p.sort.is_int() && !p.sort.is_bool())
        throw UnsupportedLogic("LIA signature with parameter sort " + p.sort.name());
    if (!ret.is_int() && !ret.is_bool())
      throw UnsupportedLogic("LIA signature with return sort " + ret.name());

    int int_nt, bool_nt;
    if (ret.is_int()) {
      int_nt = g.add_nonterminal("Start", Sort::integer());
      bool_nt = g.add_nonterminal("StartBool", Sort::boolean());
    } else {
      bool_nt = g.add_nonterminal("Start", Sort::boolean());
      int_nt = g.add_nonterminal("StartInt", Sort::integer());
    }
    g.set_start(0);

    TermPtr I = Term::hole(int_nt, Sort::integer());
    TermPtr B = Term::hole(bool_nt, Sort::boolean());

    for (const Param &p : params)
      if (p.sort.is_int())
        g.add_rule(int_nt, Term::var(p.name, p.sort));
    g.add_rule(int_nt, Term::int_lit(0));
    g.add_rule(int_nt, Term::int_lit(1));
    g.add_rule(int_nt, Term::app("+", {I, I}));
    g.add_rule(int_nt, Term::app("-", {I, I}));
    g.add_rule(int_nt, Term::app("*", {I, I}));
    g.add_rule(int_nt, Term::app("ite", {B, I, I}));

    for (const Param &p : params)
      if (p.sort.is_bool())
        g.add_rule(bool_nt, Term::var(p.name, p.sort));
    g.add_rule(bool_nt, Term::bool_lit(true));
    g.add_rule(bool_nt, Term::bool_lit(false));
    for (const char *cmp : {">", "=", "<", ">=", "<="})
      g.add_rule(bool_nt, Term::app(cmp, {I, I}));
    g.add_rule(bool_nt, Term::app("and", {B, B}));
    g.add_rule(bool_nt, Term::app("or", {B, B}));
    g.add_rule(bool_nt, Term::app("not", {B}));

    g.validate();
    return g;
  }

  if (logic == Logic::Bv) {
    // One nonterminal per bit-vector width in the signature, plus Bool.
    std::vector<unsigned> widths;
    auto note_width = [&](const Sort &s) {
      if (s.is_bv() && std::find(widths.begin(), widths.end(), s.width) == widths.end())
        widths.push_back(s.width);
    };
    note_width(ret);
    for (const Param &p : params)
      note_width(p.sort);
    if (!ret.is_bv() && !ret.is_bool())
      throw UnsupportedLogic("BV signature with return sort " + ret.name());
    if (widths.empty())
      throw UnsupportedLogic("BV signature without any bit-vector sort");

    int bool_nt = -1;
    std::map<unsigned, int> bv_nt;
    if (ret.is_bv()) {
      bv_nt[ret.width] = g.add_nonterminal("Start", ret);
      bool_nt = g.add_nonterminal("StartBool", Sort::boolean());
    } else {
      bool_nt = g.add_nonterminal("Start", Sort::boolean());
    }
    for (unsigned w : widths)
      if (!bv_nt.count(w))
        bv_nt[w] = g.add_nonterminal("StartBV" + std::to_string(w), Sort::bitvec(w));
    g.set_start(0);

    TermPtr B = Term::hole(bool_nt, Sort::boolean());
    for (auto [w, nt] : bv_nt) {
      TermPtr V = Term::hole(nt, Sort::bitvec(w));
      for (const Param &p : params)
        if (p.sort.is_bv() && p.sort.width == w)
          g.add_rule(nt, Term::var(p.name, p.sort));
      g.add_rule(nt, Term::bv_lit(w, 0));
      g.add_rule(nt, Term::bv_lit(w, 1));
      for (const char *op : {"bvadd", "bvsub", "bvand", "bvor", "bvxor", "bvshl",
                             "bvlshr", "bvashr"})
        g.add_rule(nt, Term::app(op, {V, V}));
      g.add_rule(nt, Term::app("bvnot", {V}));
      g.add_rule(nt, Term::app("bvneg", {V}));
      g.add_rule(nt, Term::app("ite", {B, V, V}));
    }

    for (const Param &p : params)
      if (p.sort.is_bool())
        g.add_rule(bool_nt, Term::var(p.name, p.sort));
    g.add_rule(bool_nt, Term::bool_lit(true));
    g.add_rule(bool_nt, Term::bool_lit(false));
    for (auto [w, nt] : bv_nt) {
      TermPtr V = Term::hole(nt, Sort::bitvec(w));
      for (const char *cmp : {"bvule", "bvult", "bvuge", "bvugt", "="})
        g.add_rule(bool_nt, Term::app(cmp, {V, V}));
    }
    g.add_rule(bool_nt, Term::app("and", {B, B}));
    g.add_rule(bool_nt, Term::app("or", {B, B}));
    g.add_rule(bool_nt, Term::app("not", {B}));

    g.validate();
    return g;
  }

  throw UnsupportedLogic("no default grammar for logic " + logic_name(logic));
}

} // namespace gsynth
