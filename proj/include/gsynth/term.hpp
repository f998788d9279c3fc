#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "gsynth/value.hpp"

namespace gsynth {

class Term;
using TermPtr = std::shared_ptr<const Term>;

struct VarNode {
  std::string name;
};

struct LitNode {
  Value value;
};

struct AppNode {
  std::string op;
  std::vector<TermPtr> args;
};

/// A typed hole labelled by a grammar nonterminal. Terms containing
/// holes are sentential forms; complete terms have none.
struct HoleNode {
  int nonterminal = -1;
};

enum class Dialect { Smtlib, Lisp };

namespace ops {

inline bool is_int_nary(const std::string &op) { return op == "+" || op == "*"; }
inline bool is_int_cmp(const std::string &op) {
  return op == ">" || op == "<" || op == ">=" || op == "<=";
}
inline bool is_bool_nary(const std::string &op) {
  return op == "and" || op == "or" || op == "=>";
}
inline bool is_bv_binary(const std::string &op) {
  return op == "bvadd" || op == "bvsub" || op == "bvand" || op == "bvor" ||
         op == "bvxor" || op == "bvshl" || op == "bvlshr" || op == "bvashr";
}
inline bool is_bv_unary(const std::string &op) { return op == "bvnot" || op == "bvneg"; }
inline bool is_bv_cmp(const std::string &op) {
  return op == "bvule" || op == "bvult" || op == "bvuge" || op == "bvugt";
}

inline bool is_known(const std::string &op) {
  return is_int_nary(op) || op == "-" || is_int_cmp(op) || is_bool_nary(op) ||
         op == "not" || op == "=" || op == "ite" || is_bv_binary(op) ||
         is_bv_unary(op) || is_bv_cmp(op);
}

/// Result sort of `op` applied to `args`, enforcing the signature.
inline Sort result_sort(const std::string &op, const std::vector<Sort> &args) {
  auto want = [&](size_t lo, size_t hi) {
    if (args.size() < lo || args.size() > hi)
      throw ArityMismatch("operator '" + op + "' applied to " +
                          std::to_string(args.size()) + " arguments");
  };
  auto all_int = [&] {
    for (const Sort &s : args)
      if (!s.is_int())
        throw SortMismatch("operator '" + op + "' expects Int arguments");
  };
  auto all_bool = [&] {
    for (const Sort &s : args)
      if (!s.is_bool())
        throw SortMismatch("operator '" + op + "' expects Bool arguments");
  };
  auto all_same_bv = [&] {
    for (const Sort &s : args)
      if (!s.is_bv() || s.width != args[0].width)
        throw SortMismatch("operator '" + op + "' expects bit-vectors of equal width");
  };

  if (is_int_nary(op)) {
    want(2, SIZE_MAX);
    all_int();
    return Sort::integer();
  }
  if (op == "-") {
    want(1, SIZE_MAX);
    all_int();
    return Sort::integer();
  }
  if (is_int_cmp(op)) {
    want(2, 2);
    all_int();
    return Sort::boolean();
  }
  if (is_bool_nary(op)) {
    want(1, SIZE_MAX);
    all_bool();
    return Sort::boolean();
  }
  if (op == "not") {
    want(1, 1);
    all_bool();
    return Sort::boolean();
  }
  if (op == "=") {
    want(2, SIZE_MAX);
    for (const Sort &s : args)
      if (s != args[0])
        throw SortMismatch("'=' expects arguments of one sort");
    return Sort::boolean();
  }
  if (op == "ite") {
    want(3, 3);
    if (!args[0].is_bool())
      throw SortMismatch("'ite' condition must be Bool");
    if (args[1] != args[2])
      throw SortMismatch("'ite' branches must have the same sort");
    return args[1];
  }
  if (is_bv_binary(op)) {
    want(2, 2);
    all_same_bv();
    return args[0];
  }
  if (is_bv_unary(op)) {
    want(1, 1);
    all_same_bv();
    return args[0];
  }
  if (is_bv_cmp(op)) {
    want(2, 2);
    all_same_bv();
    return Sort::boolean();
  }
  throw UnsupportedOperator("unknown operator '" + op + "'");
}

} // namespace ops

/// Immutable sorted term: variable, literal, operator application, or a
/// nonterminal hole. Shared subtrees are fine; terms are never mutated.
class Term : public std::enable_shared_from_this<Term> {
public:
  static TermPtr var(std::string name, Sort sort) {
    return std::shared_ptr<const Term>(new Term(VarNode{std::move(name)}, sort));
  }

  static TermPtr lit(Value v) {
    Sort s = v.sort();
    return std::shared_ptr<const Term>(new Term(LitNode{std::move(v)}, s));
  }

  static TermPtr int_lit(long long i) { return lit(Value(BigInt(i))); }
  static TermPtr bool_lit(bool b) { return lit(Value(b)); }
  static TermPtr bv_lit(unsigned width, uint64_t bits) { return lit(Value(BvVal(width, bits))); }

  static TermPtr app(std::string op, std::vector<TermPtr> args) {
    std::vector<Sort> arg_sorts;
    arg_sorts.reserve(args.size());
    for (const TermPtr &a : args)
      arg_sorts.push_back(a->sort());
    Sort s = ops::result_sort(op, arg_sorts);
    return std::shared_ptr<const Term>(new Term(AppNode{std::move(op), std::move(args)}, s));
  }

  static TermPtr hole(int nonterminal, Sort sort) {
    return std::shared_ptr<const Term>(new Term(HoleNode{nonterminal}, sort));
  }

  Sort sort() const { return sort_; }

  bool is_var() const { return std::holds_alternative<VarNode>(node_); }
  bool is_lit() const { return std::holds_alternative<LitNode>(node_); }
  bool is_app() const { return std::holds_alternative<AppNode>(node_); }
  bool is_hole() const { return std::holds_alternative<HoleNode>(node_); }

  const std::string &var_name() const { return std::get<VarNode>(node_).name; }
  const Value &lit_value() const { return std::get<LitNode>(node_).value; }
  const std::string &op() const { return std::get<AppNode>(node_).op; }
  const std::vector<TermPtr> &args() const { return std::get<AppNode>(node_).args; }
  int hole_nonterminal() const { return std::get<HoleNode>(node_).nonterminal; }

  bool is_complete() const {
    if (is_hole())
      return false;
    if (is_app())
      for (const TermPtr &a : args())
        if (!a->is_complete())
          return false;
    return true;
  }

  size_t node_count() const {
    size_t n = 1;
    if (is_app())
      for (const TermPtr &a : args())
        n += a->node_count();
    return n;
  }

  void collect_free_vars(std::set<std::string> &out) const {
    if (is_var())
      out.insert(var_name());
    else if (is_app())
      for (const TermPtr &a : args())
        a->collect_free_vars(out);
  }

  std::set<std::string> free_vars() const {
    std::set<std::string> out;
    collect_free_vars(out);
    return out;
  }

  bool equals(const Term &o) const {
    if (this == &o)
      return true;
    if (node_.index() != o.node_.index() || sort_ != o.sort_)
      return false;
    if (is_var())
      return var_name() == o.var_name();
    if (is_lit())
      return lit_value() == o.lit_value();
    if (is_hole())
      return hole_nonterminal() == o.hole_nonterminal();
    if (op() != o.op() || args().size() != o.args().size())
      return false;
    for (size_t i = 0; i < args().size(); ++i)
      if (!args()[i]->equals(*o.args()[i]))
        return false;
    return true;
  }

  /// Printed form. Holes render as "?<nt>"; for the prompt-facing "??"
  /// rendering see print with holes_as_qq.
  std::string print(Dialect d = Dialect::Smtlib, bool holes_as_qq = false) const {
    std::string out;
    print_to(out, d, holes_as_qq);
    return out;
  }

  void print_to(std::string &out, Dialect d, bool holes_as_qq) const {
    if (is_var()) {
      out += var_name();
      return;
    }
    if (is_lit()) {
      out += d == Dialect::Lisp ? lit_value().to_lisp_string() : lit_value().to_string();
      return;
    }
    if (is_hole()) {
      if (holes_as_qq)
        out += "??";
      else {
        out += '?';
        out += std::to_string(hole_nonterminal());
      }
      return;
    }
    out += '(';
    out += op();
    for (const TermPtr &a : args()) {
      out += ' ';
      a->print_to(out, d, holes_as_qq);
    }
    out += ')';
  }

  /// Simultaneous substitution of variables by terms.
  TermPtr substitute(const std::map<std::string, TermPtr> &subst) const {
    if (is_var()) {
      auto it = subst.find(var_name());
      if (it != subst.end())
        return it->second;
      return shared_from_this();
    }
    if (is_app()) {
      std::vector<TermPtr> new_args;
      new_args.reserve(args().size());
      bool changed = false;
      for (const TermPtr &a : args()) {
        TermPtr na = a->substitute(subst);
        changed |= (na.get() != a.get());
        new_args.push_back(std::move(na));
      }
      if (!changed)
        return shared_from_this();
      return app(op(), std::move(new_args));
    }
    return shared_from_this();
  }

  /// Simultaneous renaming of variable names and application symbols.
  /// Used by anonymization, where the target function symbol must be
  /// renamed alongside the variables.
  TermPtr rename(const std::map<std::string, std::string> &var_map,
                 const std::map<std::string, std::string> &op_map) const {
    if (is_var()) {
      auto it = var_map.find(var_name());
      if (it != var_map.end())
        return var(it->second, sort());
      return shared_from_this();
    }
    if (is_app()) {
      std::vector<TermPtr> new_args;
      new_args.reserve(args().size());
      for (const TermPtr &a : args())
        new_args.push_back(a->rename(var_map, op_map));
      auto it = op_map.find(op());
      const std::string &new_op = it != op_map.end() ? it->second : op();
      // The target function is uninterpreted, so bypass signature checks.
      return raw_app(new_op, std::move(new_args), sort());
    }
    return shared_from_this();
  }

  /// Application node without signature inference; for uninterpreted
  /// symbols (the synthesis target inside constraints).
  static TermPtr raw_app(std::string op, std::vector<TermPtr> args, Sort sort) {
    return std::shared_ptr<const Term>(new Term(AppNode{std::move(op), std::move(args)}, sort));
  }

private:
  Term(std::variant<VarNode, LitNode, AppNode, HoleNode> node, Sort sort)
      : node_(std::move(node)), sort_(sort) {}

  std::variant<VarNode, LitNode, AppNode, HoleNode> node_;
  Sort sort_;
};

inline bool term_eq(const TermPtr &a, const TermPtr &b) {
  return a == b || (a && b && a->equals(*b));
}

} // namespace gsynth
