#pragma once

#include <cstring>

#include "gsynth/sygus_parser.hpp"

namespace gsynth {

/// A function as extracted from an LLM response: either a sorted
/// SMT-LIB define-fun or a sortless Lisp defun.
struct ExtractedFunction {
  bool smtlib = false;
  std::string name;
  std::vector<std::string> params; // defun form
  std::vector<Param> sorted_params; // define-fun form
  std::optional<Sort> ret;          // define-fun form
  SExpr body;
};

namespace detail {

inline std::string strip_code_fences(const std::string &text) {
  std::string out;
  out.reserve(text.size());
  size_t pos = 0;
  while (pos < text.size()) {
    if (text.compare(pos, 3, "```") == 0) {
      pos += 3;
      while (pos < text.size() && text[pos] != '\n')
        ++pos; // drop the language tag
      continue;
    }
    out += text[pos++];
  }
  return out;
}

/// Locates every top-level (defun ...) / (define-fun ...) in free text;
/// prose between and around the s-expressions is ignored.
inline std::vector<SExpr> find_function_sexprs(const std::string &text) {
  std::string cleaned = strip_code_fences(text);
  std::vector<SExpr> found;
  for (const char *marker : {"(defun", "(define-fun"}) {
    size_t pos = 0;
    while ((pos = cleaned.find(marker, pos)) != std::string::npos) {
      // The marker must end at a delimiter, not inside a longer symbol.
      char after = pos + strlen(marker) < cleaned.size() ? cleaned[pos + strlen(marker)]
                                                         : ' ';
      if (after != ' ' && after != '\n' && after != '\t' && after != '(') {
        ++pos;
        continue;
      }
      SExprReader reader(std::string_view(cleaned).substr(pos));
      SExpr e;
      try {
        if (reader.next(e))
          found.push_back(std::move(e));
      } catch (const ParseError &) {
        // unbalanced fragment; keep scanning
      }
      ++pos;
    }
  }
  return found;
}

inline ExtractedFunction classify_function(const SExpr &e) {
  ExtractedFunction f;
  if (!e.is_list() || e.size() < 3 || !e[0].is_atom() || !e[1].is_atom())
    throw NoProgramFound("not a function definition: " + e.to_string().substr(0, 80));
  f.name = e[1].atom();
  if (e[0].is("define-fun")) {
    if (e.size() < 4)
      throw IncompleteFunction("define-fun '" + f.name + "' has no return sort");
    f.smtlib = true;
    if (!e[2].is_list())
      throw NoProgramFound("define-fun '" + f.name + "' has no parameter list");
    for (const SExpr &q : e[2].list()) {
      if (!q.is_list() || q.size() != 2 || !q[0].is_atom())
        throw NoProgramFound("bad parameter in define-fun '" + f.name + "'");
      f.sorted_params.push_back({q[0].atom(), SygusParser::parse_sort(q[1])});
    }
    f.ret = SygusParser::parse_sort(e[3]);
    if (e.size() < 5)
      throw IncompleteFunction("define-fun '" + f.name + "' has a header but no body");
    f.body = e[e.size() - 1];
    return f;
  }
  // defun NAME (params) body
  if (!e[2].is_list())
    throw NoProgramFound("defun '" + f.name + "' has no parameter list");
  for (const SExpr &q : e[2].list()) {
    if (!q.is_atom())
      throw NoProgramFound("bad parameter in defun '" + f.name + "'");
    f.params.push_back(q.atom());
  }
  if (e.size() < 4)
    throw IncompleteFunction("defun '" + f.name + "' has a header but no body");
  f.body = e[e.size() - 1]; // last form is the value, progn style
  return f;
}

} // namespace detail

/// First function definition in a response, fences and prose ignored.
/// NoProgramFound / IncompleteFunction both mean "discard and continue".
inline ExtractedFunction extract_program(const std::string &response) {
  std::vector<SExpr> found = detail::find_function_sexprs(response);
  if (found.empty())
    throw NoProgramFound("response contains no defun or define-fun");
  return detail::classify_function(found[0]);
}

/// Every function definition in a response, skipping malformed ones.
inline std::vector<ExtractedFunction> extract_all_programs(const std::string &response) {
  std::vector<ExtractedFunction> out;
  for (const SExpr &e : detail::find_function_sexprs(response)) {
    try {
      out.push_back(detail::classify_function(e));
    } catch (const Error &) {
      // skip
    }
  }
  return out;
}

namespace detail {

/// Expected-sort-directed typing of an extracted body. Bare integer
/// literals coerce to bit-vectors when the context demands it (the
/// prompts forbid BitVec notation, so LLM replies use plain numbers).
class BodyTyper {
public:
  BodyTyper(const std::map<std::string, Sort> &env, unsigned bv_width_hint)
      : env_(env), width_(bv_width_hint) {}

  TermPtr type(const SExpr &e, std::optional<Sort> expected) const {
    if (e.is_atom())
      return atom(e, expected);
    if (e.size() == 0)
      throw NoProgramFound("empty expression");
    if (e[0].is("_"))
      return Term::lit(parse_indexed_literal(e));
    if (!e[0].is_atom())
      throw UnsupportedOperator("expected an operator: " + e.to_string().substr(0, 40));
    const std::string &op = e[0].atom();
    size_t n = e.size() - 1;

    if (op == "ite") {
      if (n != 3)
        throw ArityMismatch("ite expects 3 arguments");
      TermPtr c = type(e[1], Sort::boolean());
      TermPtr a = type(e[2], expected);
      TermPtr b = type(e[3], a->sort());
      return Term::app("ite", {c, a, b});
    }
    if (op == "=") {
      if (n < 2)
        throw ArityMismatch("= expects at least 2 arguments");
      TermPtr first = type_unconstrained(e[1]);
      std::vector<TermPtr> args{first};
      for (size_t i = 2; i <= n; ++i)
        args.push_back(type(e[static_cast<int>(i)], first->sort()));
      return Term::app("=", std::move(args));
    }
    if (ops::is_int_nary(op) || op == "-" || ops::is_int_cmp(op)) {
      std::vector<TermPtr> args;
      for (size_t i = 1; i <= n; ++i)
        args.push_back(type(e[static_cast<int>(i)], Sort::integer()));
      return Term::app(op, std::move(args));
    }
    if (ops::is_bool_nary(op) || op == "not") {
      std::vector<TermPtr> args;
      for (size_t i = 1; i <= n; ++i)
        args.push_back(type(e[static_cast<int>(i)], Sort::boolean()));
      return Term::app(op, std::move(args));
    }
    if (ops::is_bv_binary(op) || ops::is_bv_unary(op) || ops::is_bv_cmp(op)) {
      Sort bv = expected && expected->is_bv() ? *expected : Sort::bitvec(width_ ? width_ : 8);
      // Let a sorted first argument pin the width.
      TermPtr first = type(e[1], bv);
      std::vector<TermPtr> args{first};
      for (size_t i = 2; i <= n; ++i)
        args.push_back(type(e[static_cast<int>(i)], first->sort()));
      return Term::app(op, std::move(args));
    }
    throw UnsupportedOperator("operator '" + op + "' is outside the supported set");
  }

  TermPtr type_unconstrained(const SExpr &e) const { return type(e, std::nullopt); }

private:
  TermPtr atom(const SExpr &e, std::optional<Sort> expected) const {
    const std::string &s = e.atom();
    auto it = env_.find(s);
    if (it != env_.end()) {
      if (expected && it->second != *expected)
        throw SortMismatch("variable '" + s + "' has sort " + it->second.name() +
                           " where " + expected->name() + " is required");
      return Term::var(s, it->second);
    }
    if (auto v = parse_literal_atom(s)) {
      if (expected && expected->is_bv() && v->is_int()) {
        // Plain integer in a bit-vector context.
        BigInt masked = v->as_int() % (BigInt(1) << expected->width);
        if (masked < 0)
          masked += BigInt(1) << expected->width;
        return Term::bv_lit(expected->width, masked.convert_to<uint64_t>());
      }
      if (expected && v->sort() != *expected)
        throw SortMismatch("literal '" + s + "' has sort " + v->sort().name() + " where " +
                           expected->name() + " is required");
      return Term::lit(*v);
    }
    throw UnboundVariable("identifier '" + s + "' is not a parameter of the function");
  }

  const std::map<std::string, Sort> &env_;
  unsigned width_;
};

inline unsigned signature_bv_width(const DefinedFunction &target) {
  if (target.ret.is_bv())
    return target.ret.width;
  for (const Param &q : target.params)
    if (q.sort.is_bv())
      return q.sort.width;
  return 0;
}

} // namespace detail

/// Converts an extracted Lisp defun into a sorted define-fun using the
/// target signature: parameter sorts are taken positionally, and the
/// body is typed under them. define-fun extractions just get re-typed.
inline DefinedFunction lisp_to_smtlib(const ExtractedFunction &f, const SynthProblem &p) {
  DefinedFunction out;
  out.name = p.target.name;
  out.ret = p.target.ret;
  std::map<std::string, Sort> env;
  if (f.smtlib) {
    if (f.sorted_params.size() != p.target.params.size())
      throw ArityMismatch("'" + f.name + "' takes " + std::to_string(f.sorted_params.size()) +
                          " parameters but the target takes " +
                          std::to_string(p.target.params.size()));
    out.params = f.sorted_params;
  } else {
    if (f.params.size() != p.target.params.size())
      throw ArityMismatch("'" + f.name + "' takes " + std::to_string(f.params.size()) +
                          " parameters but the target takes " +
                          std::to_string(p.target.params.size()));
    for (size_t i = 0; i < f.params.size(); ++i)
      out.params.push_back({f.params[i], p.target.params[i].sort});
  }
  for (const Param &q : out.params)
    env[q.name] = q.sort;
  detail::BodyTyper typer(env, detail::signature_bv_width(p.target));
  out.body = typer.type(f.body, out.ret);
  return out;
}

/// Types a helper function (any arity). define-fun helpers carry their
/// sorts; defun helpers get parameter sorts inferred from use, with the
/// theory default for parameters no operator constrains.
inline DefinedFunction helper_to_function(const ExtractedFunction &f, const SynthProblem &p) {
  unsigned width = detail::signature_bv_width(p.target);
  Sort default_sort = p.logic == Logic::Bv && width ? Sort::bitvec(width) : Sort::integer();

  if (f.smtlib) {
    DefinedFunction out{f.name, f.sorted_params, f.ret.value_or(default_sort), nullptr};
    std::map<std::string, Sort> env;
    for (const Param &q : out.params)
      env[q.name] = q.sort;
    // Free use of the problem's own terminals is allowed; augment
    // validates them against the grammar.
    for (const Param &q : p.target.params)
      env.emplace(q.name, q.sort);
    detail::BodyTyper typer(env, width);
    out.body = typer.type(f.body, out.ret);
    return out;
  }

  // Infer parameter sorts by repeated expected-sort passes.
  std::map<std::string, std::optional<Sort>> inferred;
  for (const std::string &name : f.params)
    inferred[name] = std::nullopt;

  for (int pass = 0; pass < 3; ++pass) {
    bool progress = false;
    // Walk the body, recording the expected sort at parameter uses.
    std::function<void(const SExpr &, std::optional<Sort>)> walk =
        [&](const SExpr &e, std::optional<Sort> expected) {
          if (e.is_atom()) {
            auto it = inferred.find(e.atom());
            if (it != inferred.end() && !it->second && expected) {
              it->second = expected;
              progress = true;
            }
            return;
          }
          if (e.size() == 0 || !e[0].is_atom())
            return;
          const std::string &op = e[0].atom();
          if (op == "ite" && e.size() == 4) {
            walk(e[1], Sort::boolean());
            std::optional<Sort> branch = expected;
            for (int i = 2; i <= 3; ++i)
              if (e[i].is_atom()) {
                auto it = inferred.find(e[i].atom());
                if (it != inferred.end() && it->second)
                  branch = it->second;
              }
            walk(e[2], branch);
            walk(e[3], branch);
            return;
          }
          std::optional<Sort> arg_expected;
          if (ops::is_int_nary(op) || op == "-" || ops::is_int_cmp(op))
            arg_expected = Sort::integer();
          else if (ops::is_bool_nary(op) || op == "not")
            arg_expected = Sort::boolean();
          else if (ops::is_bv_binary(op) || ops::is_bv_unary(op) || ops::is_bv_cmp(op))
            arg_expected = width ? Sort::bitvec(width) : std::optional<Sort>{};
          else if (op == "=") {
            // Adopt the sort of any already-known side.
            for (size_t i = 1; i < e.size(); ++i)
              if (e[static_cast<int>(i)].is_atom()) {
                auto it = inferred.find(e[static_cast<int>(i)].atom());
                if (it != inferred.end() && it->second)
                  arg_expected = it->second;
              }
          }
          for (size_t i = 1; i < e.size(); ++i)
            walk(e[static_cast<int>(i)], arg_expected);
        };
    walk(f.body, std::nullopt);
    if (!progress)
      break;
  }

  DefinedFunction out;
  out.name = f.name;
  std::map<std::string, Sort> env;
  for (const std::string &name : f.params) {
    Sort s = inferred[name].value_or(default_sort);
    out.params.push_back({name, s});
    env[name] = s;
  }
  for (const Param &q : p.target.params)
    env.emplace(q.name, q.sort);
  detail::BodyTyper typer(env, width);
  out.body = typer.type_unconstrained(f.body);
  out.ret = out.body->sort();
  return out;
}

} // namespace gsynth
