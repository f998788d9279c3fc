#pragma once

#include <cctype>

#include "gsynth/default_grammar.hpp"
#include "gsynth/problem.hpp"
#include "gsynth/sexpr.hpp"

namespace gsynth {

namespace detail {

inline bool is_numeral(const std::string &s) {
  if (s.empty())
    return false;
  size_t i = (s[0] == '-' && s.size() > 1) ? 1 : 0;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      return false;
  return true;
}

inline std::optional<Value> parse_literal_atom(const std::string &s) {
  if (s == "true")
    return Value(true);
  if (s == "false")
    return Value(false);
  if (is_numeral(s))
    return Value(BigInt(s));
  if (s.size() > 2 && s[0] == '#' && s[1] == 'x') {
    unsigned width = 4 * static_cast<unsigned>(s.size() - 2);
    uint64_t bits = 0;
    for (size_t i = 2; i < s.size(); ++i) {
      char c = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
      uint64_t d;
      if (c >= '0' && c <= '9')
        d = static_cast<uint64_t>(c - '0');
      else if (c >= 'a' && c <= 'f')
        d = static_cast<uint64_t>(c - 'a' + 10);
      else
        return std::nullopt;
      bits = (bits << 4) | d;
    }
    return Value(BvVal(width, bits));
  }
  if (s.size() > 2 && s[0] == '#' && s[1] == 'b') {
    unsigned width = static_cast<unsigned>(s.size() - 2);
    uint64_t bits = 0;
    for (size_t i = 2; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1')
        return std::nullopt;
      bits = (bits << 1) | static_cast<uint64_t>(s[i] - '0');
    }
    return Value(BvVal(width, bits));
  }
  return std::nullopt;
}

/// (_ bvN width) indexed bit-vector literal.
inline Value parse_indexed_literal(const SExpr &e) {
  if (e.size() == 3 && e[1].is_atom() && e[1].atom().size() > 2 &&
      e[1].atom().substr(0, 2) == "bv" && is_numeral(e[2].atom())) {
    std::string num = e[1].atom().substr(2);
    if (is_numeral(num)) {
      unsigned width = static_cast<unsigned>(std::stol(e[2].atom()));
      return Value(BvVal(width, std::stoull(num)));
    }
  }
  throw UnsupportedFeature("unsupported indexed term '" + e.to_string() + "'");
}

} // namespace detail

/// Parser for the supported SyGuS v2 subset: single synth-fun,
/// declare-var, constraint, inv-constraint, check-synth; declare-fun
/// auxiliaries become universals and define-fun auxiliaries are inlined.
class SygusParser {
public:
  SynthProblem parse(const std::string &text) {
    for (const SExpr &cmd : parse_sexprs(text))
      command(cmd);
    finish();
    return std::move(problem_);
  }

  /// Parses a sort s-expression: Int, Bool, (_ BitVec w).
  static Sort parse_sort(const SExpr &e) {
    if (e.is("Int"))
      return Sort::integer();
    if (e.is("Bool"))
      return Sort::boolean();
    if (e.is_list() && e.size() == 3 && e[0].is("_") && e[1].is("BitVec") &&
        detail::is_numeral(e[2].atom())) {
      long w = std::stol(e[2].atom());
      if (w < 1)
        throw ParseError("bit-vector width must be positive", e.line, e.col);
      return Sort::bitvec(static_cast<unsigned>(w));
    }
    throw UnsupportedFeature("unsupported sort '" + e.to_string() + "' at " +
                             std::to_string(e.line) + ":" + std::to_string(e.col));
  }

private:
  SynthProblem problem_;
  bool have_synth_fun_ = false;
  bool have_logic_ = false;

  void command(const SExpr &cmd) {
    if (!cmd.is_list() || cmd.size() == 0 || !cmd[0].is_atom())
      throw ParseError("expected a command", cmd.line, cmd.col);
    const std::string &head = cmd[0].atom();

    if (head == "set-logic") {
      expect_size(cmd, 2);
      const std::string &l = cmd[1].atom();
      if (l == "LIA")
        problem_.logic = Logic::Lia;
      else if (l == "BV")
        problem_.logic = Logic::Bv;
      else
        throw UnsupportedLogic("unsupported logic '" + l + "'");
      have_logic_ = true;
      return;
    }
    if (head == "set-option" || head == "set-info" || head == "set-feature")
      return; // benign metadata
    if (head == "synth-fun") {
      parse_synth_fun(cmd);
      return;
    }
    if (head == "declare-var") {
      expect_size(cmd, 3);
      problem_.universals.push_back({cmd[1].atom(), parse_sort(cmd[2])});
      return;
    }
    if (head == "declare-fun") {
      // Zero-arity declare-fun is a universal variable.
      expect_size(cmd, 4);
      if (!cmd[2].is_list() || cmd[2].size() != 0)
        throw UnsupportedFeature("declare-fun with arguments is not supported");
      problem_.universals.push_back({cmd[1].atom(), parse_sort(cmd[3])});
      return;
    }
    if (head == "define-fun") {
      parse_define_fun(cmd);
      return;
    }
    if (head == "constraint") {
      expect_size(cmd, 2);
      TermPtr t = parse_term(cmd[1], {});
      if (!t->sort().is_bool())
        throw SortMismatch("constraint is not Boolean at " + std::to_string(cmd.line) + ":" +
                           std::to_string(cmd.col));
      problem_.constraints.push_back(std::move(t));
      return;
    }
    if (head == "inv-constraint") {
      expect_size(cmd, 5);
      problem_.inv_spec = InvSpec{cmd[1].atom(), cmd[2].atom(), cmd[3].atom(), cmd[4].atom()};
      if (problem_.logic == Logic::Lia)
        problem_.logic = Logic::LiaInv;
      return;
    }
    if (head == "check-synth")
      return;
    throw UnsupportedFeature("unsupported command '" + head + "' at " +
                             std::to_string(cmd.line) + ":" + std::to_string(cmd.col));
  }

  static void expect_size(const SExpr &cmd, size_t n) {
    if (cmd.size() != n)
      throw ParseError("command '" + cmd[0].atom() + "' expects " + std::to_string(n - 1) +
                           " arguments",
                       cmd.line, cmd.col);
  }

  static std::vector<Param> parse_params(const SExpr &e) {
    std::vector<Param> params;
    if (!e.is_list())
      throw ParseError("expected parameter list", e.line, e.col);
    for (const SExpr &p : e.list()) {
      if (!p.is_list() || p.size() != 2 || !p[0].is_atom())
        throw ParseError("expected (name Sort) parameter", p.line, p.col);
      params.push_back({p[0].atom(), parse_sort(p[1])});
    }
    return params;
  }

  void parse_synth_fun(const SExpr &cmd) {
    if (have_synth_fun_)
      throw UnsupportedFeature("multiple synth-fun commands are not supported");
    if (cmd.size() != 4 && cmd.size() != 6)
      throw ParseError("synth-fun expects a signature and optionally a grammar", cmd.line,
                       cmd.col);
    have_synth_fun_ = true;
    problem_.target.name = cmd[1].atom();
    problem_.target.params = parse_params(cmd[2]);
    problem_.target.ret = parse_sort(cmd[3]);
    if (cmd.size() == 6)
      parse_grammar(cmd[4], cmd[5]);
  }

  void parse_grammar(const SExpr &decls, const SExpr &groups) {
    Grammar g;
    if (!decls.is_list() || decls.size() == 0)
      throw ParseError("expected nonterminal declarations", decls.line, decls.col);
    for (const SExpr &d : decls.list()) {
      if (!d.is_list() || d.size() != 2 || !d[0].is_atom())
        throw ParseError("expected (Nonterminal Sort)", d.line, d.col);
      g.add_nonterminal(d[0].atom(), parse_sort(d[1]));
    }
    g.set_start(0);
    if (!groups.is_list() || groups.size() != g.num_nonterminals())
      throw ParseError("expected one rule group per nonterminal", groups.line, groups.col);
    for (const SExpr &grp : groups.list()) {
      if (!grp.is_list() || grp.size() != 3 || !grp[0].is_atom())
        throw ParseError("expected (Nonterminal Sort (rules...))", grp.line, grp.col);
      auto nt = g.find_nonterminal(grp[0].atom());
      if (!nt)
        throw ParseError("undeclared nonterminal '" + grp[0].atom() + "'", grp.line, grp.col);
      if (parse_sort(grp[1]) != g.nonterminal(*nt).sort)
        throw ParseError("rule group sort differs from declaration", grp[1].line, grp[1].col);
      if (!grp[2].is_list())
        throw ParseError("expected a rule list", grp[2].line, grp[2].col);
      for (const SExpr &rule : grp[2].list())
        g.add_rule(*nt, parse_gterm(rule, g));
    }
    g.validate();
    problem_.grammar = std::move(g);
  }

  /// Grammar production pattern: nonterminal references become holes.
  TermPtr parse_gterm(const SExpr &e, const Grammar &g) {
    if (e.is_atom()) {
      if (auto nt = g.find_nonterminal(e.atom()))
        return Term::hole(*nt, g.nonterminal(*nt).sort);
      if (auto v = detail::parse_literal_atom(e.atom()))
        return Term::lit(*v);
      for (const Param &p : problem_.target.params)
        if (p.name == e.atom())
          return Term::var(p.name, p.sort);
      throw ParseError("unknown grammar symbol '" + e.atom() + "'", e.line, e.col);
    }
    if (e.size() == 0)
      throw ParseError("empty grammar term", e.line, e.col);
    if (e[0].is("Constant") || e[0].is("Variable"))
      throw UnsupportedFeature("grammar special production '" + e[0].atom() +
                               "' is not supported");
    if (e[0].is("_"))
      return Term::lit(detail::parse_indexed_literal(e));
    if (!e[0].is_atom())
      throw ParseError("expected an operator", e.line, e.col);
    std::vector<TermPtr> args;
    for (size_t i = 1; i < e.size(); ++i)
      args.push_back(parse_gterm(e[i], g));
    return apply_operator(e, e[0].atom(), std::move(args));
  }

  /// Parses a constraint/body term. `locals` carries macro formals.
  TermPtr parse_term(const SExpr &e, const std::map<std::string, Sort> &locals) {
    if (e.is_atom()) {
      if (auto v = detail::parse_literal_atom(e.atom()))
        return Term::lit(*v);
      auto it = locals.find(e.atom());
      if (it != locals.end())
        return Term::var(e.atom(), it->second);
      if (auto u = problem_.find_universal(e.atom()))
        return Term::var(u->name, u->sort);
      throw UnboundVariable("unbound identifier '" + e.atom() + "' at " +
                            std::to_string(e.line) + ":" + std::to_string(e.col));
    }
    if (e.size() == 0)
      throw ParseError("empty term", e.line, e.col);
    if (e[0].is("_"))
      return Term::lit(detail::parse_indexed_literal(e));
    if (e[0].is("let"))
      throw UnsupportedFeature("let bindings are not supported");
    if (!e[0].is_atom())
      throw ParseError("expected an operator", e.line, e.col);
    const std::string &op = e[0].atom();

    std::vector<TermPtr> args;
    for (size_t i = 1; i < e.size(); ++i)
      args.push_back(parse_term(e[i], locals));

    // Macro application: inline the body with arguments substituted.
    auto m = problem_.macros.find(op);
    if (m != problem_.macros.end()) {
      const DefinedFunction &f = m->second;
      if (args.size() != f.params.size())
        throw ArityMismatch("'" + op + "' expects " + std::to_string(f.params.size()) +
                            " arguments");
      std::map<std::string, TermPtr> subst;
      for (size_t i = 0; i < args.size(); ++i) {
        if (args[i]->sort() != f.params[i].sort)
          throw SortMismatch("argument " + std::to_string(i) + " of '" + op + "'");
        subst[f.params[i].name] = args[i];
      }
      return f.body->substitute(subst);
    }

    return apply_operator(e, op, std::move(args));
  }

  TermPtr apply_operator(const SExpr &e, const std::string &op, std::vector<TermPtr> args) {
    // Application of the synthesis target stays uninterpreted.
    if (have_synth_fun_ && op == problem_.target.name) {
      if (args.size() != problem_.target.params.size())
        throw ArityMismatch("'" + op + "' expects " +
                            std::to_string(problem_.target.params.size()) + " arguments");
      for (size_t i = 0; i < args.size(); ++i)
        if (args[i]->sort() != problem_.target.params[i].sort)
          throw SortMismatch("argument " + std::to_string(i) + " of '" + op + "'");
      return Term::raw_app(op, std::move(args), problem_.target.ret);
    }
    if (!ops::is_known(op))
      throw UnsupportedFeature("unsupported operator '" + op + "' at " +
                               std::to_string(e.line) + ":" + std::to_string(e.col));
    return Term::app(op, std::move(args)); // may throw Sort/ArityMismatch
  }

  void parse_define_fun(const SExpr &cmd) {
    expect_size(cmd, 5);
    DefinedFunction f;
    f.name = cmd[1].atom();
    f.params = parse_params(cmd[2]);
    f.ret = parse_sort(cmd[3]);
    std::map<std::string, Sort> locals;
    for (const Param &p : f.params)
      locals[p.name] = p.sort;
    f.body = parse_term(cmd[4], locals);
    if (f.body->sort() != f.ret)
      throw SortMismatch("define-fun '" + f.name + "' body sort differs from declaration");
    problem_.macros[f.name] = std::move(f);
  }

  void finish() {
    if (!have_synth_fun_)
      throw UnsupportedFeature("no synth-fun command");
    if (!have_logic_)
      throw UnsupportedFeature("no set-logic command");
    if (problem_.grammar.num_nonterminals() == 0)
      problem_.grammar =
          default_grammar(problem_.logic, problem_.target.params, problem_.target.ret);
  }
};

inline SynthProblem parse_problem(const std::string &text) {
  return SygusParser().parse(text);
}

} // namespace gsynth
