#pragma once

#include "gsynth/problem.hpp"

namespace gsynth {

/// A valuation of the universal variables, as returned by the verifier.
struct Counterexample {
  std::map<std::string, Value> valuation;

  bool operator==(const Counterexample &o) const = default;

  std::string to_string() const {
    std::string out = "(";
    bool first = true;
    for (const auto &[name, v] : valuation) {
      if (!first)
        out += ", ";
      first = false;
      out += name + " = " + v.to_string();
    }
    return out + ")";
  }
};

namespace detail {

struct EvalEnv {
  const std::map<std::string, Value> *vars = nullptr;
  // At most one bound function: the candidate standing in for the target.
  const DefinedFunction *fn = nullptr;
};

inline Value eval_node(const Term &t, const EvalEnv &env);

inline Value eval_app(const Term &t, const EvalEnv &env) {
  const std::string &op = t.op();
  const auto &args = t.args();

  // ite is lazy in the untaken branch.
  if (op == "ite") {
    bool c = eval_node(*args[0], env).as_bool();
    return eval_node(*args[c ? 1 : 2], env);
  }
  // Short-circuit Boolean connectives.
  if (op == "and") {
    for (const TermPtr &a : args)
      if (!eval_node(*a, env).as_bool())
        return Value(false);
    return Value(true);
  }
  if (op == "or") {
    for (const TermPtr &a : args)
      if (eval_node(*a, env).as_bool())
        return Value(true);
    return Value(false);
  }
  if (op == "=>") {
    // Right-associative: a => b => c == a => (b => c).
    for (size_t i = 0; i + 1 < args.size(); ++i)
      if (!eval_node(*args[i], env).as_bool())
        return Value(true);
    return eval_node(*args.back(), env);
  }

  // Candidate function application: bind formals by position.
  if (env.fn && op == env.fn->name) {
    if (args.size() != env.fn->params.size())
      throw ArityMismatch("application of '" + op + "'");
    std::map<std::string, Value> bound;
    for (size_t i = 0; i < args.size(); ++i)
      bound[env.fn->params[i].name] = eval_node(*args[i], env);
    EvalEnv inner{&bound, nullptr};
    return eval_node(*env.fn->body, inner);
  }

  std::vector<Value> vals;
  vals.reserve(args.size());
  for (const TermPtr &a : args)
    vals.push_back(eval_node(*a, env));

  if (op == "+") {
    BigInt acc = vals[0].as_int();
    for (size_t i = 1; i < vals.size(); ++i)
      acc += vals[i].as_int();
    return Value(acc);
  }
  if (op == "*") {
    BigInt acc = vals[0].as_int();
    for (size_t i = 1; i < vals.size(); ++i)
      acc *= vals[i].as_int();
    return Value(acc);
  }
  if (op == "-") {
    if (vals.size() == 1)
      return Value(BigInt(-vals[0].as_int()));
    BigInt acc = vals[0].as_int();
    for (size_t i = 1; i < vals.size(); ++i)
      acc -= vals[i].as_int();
    return Value(acc);
  }
  if (op == ">")
    return Value(vals[0].as_int() > vals[1].as_int());
  if (op == "<")
    return Value(vals[0].as_int() < vals[1].as_int());
  if (op == ">=")
    return Value(vals[0].as_int() >= vals[1].as_int());
  if (op == "<=")
    return Value(vals[0].as_int() <= vals[1].as_int());
  if (op == "not")
    return Value(!vals[0].as_bool());
  if (op == "=") {
    for (size_t i = 0; i + 1 < vals.size(); ++i)
      if (!(vals[i] == vals[i + 1]))
        return Value(false);
    return Value(true);
  }

  // Bit-vector operations; arithmetic is modular in the width.
  auto bv2 = [&](auto f) {
    const BvVal &a = vals[0].as_bv();
    const BvVal &b = vals[1].as_bv();
    if (a.width != b.width)
      throw SortMismatch("bit-vector width mismatch in '" + op + "'");
    return Value(BvVal(a.width, f(a, b)));
  };
  if (op == "bvadd")
    return bv2([](const BvVal &a, const BvVal &b) { return a.bits + b.bits; });
  if (op == "bvsub")
    return bv2([](const BvVal &a, const BvVal &b) { return a.bits - b.bits; });
  if (op == "bvand")
    return bv2([](const BvVal &a, const BvVal &b) { return a.bits & b.bits; });
  if (op == "bvor")
    return bv2([](const BvVal &a, const BvVal &b) { return a.bits | b.bits; });
  if (op == "bvxor")
    return bv2([](const BvVal &a, const BvVal &b) { return a.bits ^ b.bits; });
  if (op == "bvshl")
    return bv2([](const BvVal &a, const BvVal &b) {
      return b.bits >= a.width ? uint64_t{0} : a.bits << b.bits;
    });
  if (op == "bvlshr")
    return bv2([](const BvVal &a, const BvVal &b) {
      return b.bits >= a.width ? uint64_t{0} : a.bits >> b.bits;
    });
  if (op == "bvashr")
    return bv2([](const BvVal &a, const BvVal &b) {
      uint64_t sign_fill = a.sign_bit() ? BvVal::mask(a.width) : 0;
      if (b.bits >= a.width)
        return sign_fill;
      uint64_t shifted = a.bits >> b.bits;
      if (a.sign_bit())
        shifted |= sign_fill << (a.width - b.bits);
      return shifted;
    });
  if (op == "bvnot") {
    const BvVal &a = vals[0].as_bv();
    return Value(BvVal(a.width, ~a.bits));
  }
  if (op == "bvneg") {
    const BvVal &a = vals[0].as_bv();
    return Value(BvVal(a.width, ~a.bits + 1));
  }
  auto ucmp = [&](auto f) {
    const BvVal &a = vals[0].as_bv();
    const BvVal &b = vals[1].as_bv();
    if (a.width != b.width)
      throw SortMismatch("bit-vector width mismatch in '" + op + "'");
    return Value(f(a.bits, b.bits));
  };
  if (op == "bvule")
    return ucmp([](uint64_t a, uint64_t b) { return a <= b; });
  if (op == "bvult")
    return ucmp([](uint64_t a, uint64_t b) { return a < b; });
  if (op == "bvuge")
    return ucmp([](uint64_t a, uint64_t b) { return a >= b; });
  if (op == "bvugt")
    return ucmp([](uint64_t a, uint64_t b) { return a > b; });

  throw UnsupportedOperator("cannot evaluate operator '" + op + "'");
}

inline Value eval_node(const Term &t, const EvalEnv &env) {
  if (t.is_lit())
    return t.lit_value();
  if (t.is_var()) {
    auto it = env.vars->find(t.var_name());
    if (it == env.vars->end())
      throw UnboundVariable("unbound variable '" + t.var_name() + "'");
    if (it->second.sort() != t.sort())
      throw SortMismatch("variable '" + t.var_name() + "' bound at sort " +
                         it->second.sort().name() + " but used at " + t.sort().name());
    return it->second;
  }
  if (t.is_hole())
    throw Error("cannot evaluate a sentential form");
  return eval_app(t, env);
}

} // namespace detail

/// Evaluates a complete term under a valuation, SMT-LIB semantics.
inline Value eval(const TermPtr &t, const std::map<std::string, Value> &valuation) {
  detail::EvalEnv env{&valuation, nullptr};
  return detail::eval_node(*t, env);
}

/// Evaluates a term in which applications of `fn.name` call the given
/// candidate (arguments substituted positionally, as in Def. 4).
inline Value eval_with_fn(const TermPtr &t, const std::map<std::string, Value> &valuation,
                          const DefinedFunction &fn) {
  detail::EvalEnv env{&valuation, &fn};
  return detail::eval_node(*t, env);
}

/// True iff the candidate satisfies every constraint on every stored
/// counterexample (the internal CEGIS check of Alg. 2).
inline bool check_cex(const DefinedFunction &candidate, const SynthProblem &p,
                      const std::vector<Counterexample> &cexs) {
  for (const Counterexample &cex : cexs)
    for (const TermPtr &c : p.constraints)
      if (!eval_with_fn(c, cex.valuation, candidate).as_bool())
        return false;
  return true;
}

} // namespace gsynth
