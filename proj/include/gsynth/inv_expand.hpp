#pragma once

#include "gsynth/problem.hpp"

namespace gsynth {

/// Expands an inv-constraint into the three explicit constraints
///   pre(x) => inv(x)
///   inv(x) /\ trans(x, x') => inv(x')
///   inv(x) => post(x)
/// over duplicated primed variables. Idempotent: an already-expanded
/// problem is returned unchanged.
inline SynthProblem expand_inv_constraints(const SynthProblem &p) {
  if (p.inv_expanded)
    return p;
  if (!p.inv_spec)
    throw NotInvariantProblem("problem has no inv-constraint");
  const InvSpec &spec = *p.inv_spec;

  if (spec.inv != p.target.name)
    throw NotInvariantProblem("inv-constraint names '" + spec.inv +
                              "' but the synthesis target is '" + p.target.name + "'");
  auto lookup = [&](const std::string &name) -> const DefinedFunction & {
    auto it = p.macros.find(name);
    if (it == p.macros.end())
      throw NotInvariantProblem("inv-constraint names undefined function '" + name + "'");
    return it->second;
  };
  const DefinedFunction &pre = lookup(spec.pre);
  const DefinedFunction &trans = lookup(spec.trans);
  const DefinedFunction &post = lookup(spec.post);

  size_t n = p.target.params.size();
  if (!p.target.ret.is_bool())
    throw NotInvariantProblem("invariant target must return Bool");
  if (pre.params.size() != n || !pre.ret.is_bool())
    throw NotInvariantProblem("'" + spec.pre + "' does not match the invariant signature");
  if (trans.params.size() != 2 * n || !trans.ret.is_bool())
    throw NotInvariantProblem("'" + spec.trans + "' must take primed and unprimed state");
  if (post.params.size() != n || !post.ret.is_bool())
    throw NotInvariantProblem("'" + spec.post + "' does not match the invariant signature");

  SynthProblem out = p;

  // Universals: the invariant's state variables and their primed copies.
  std::vector<TermPtr> xs, xps;
  auto declare = [&](const std::string &name, Sort sort) -> TermPtr {
    if (auto existing = out.find_universal(name)) {
      if (existing->sort != sort)
        throw NotInvariantProblem("variable '" + name + "' redeclared at a different sort");
    } else {
      out.universals.push_back({name, sort});
    }
    return Term::var(name, sort);
  };
  for (const Param &q : p.target.params)
    xs.push_back(declare(q.name, q.sort));
  for (const Param &q : p.target.params)
    xps.push_back(declare(q.name + "!", q.sort));

  auto apply_macro = [](const DefinedFunction &f, const std::vector<TermPtr> &args) {
    std::map<std::string, TermPtr> subst;
    for (size_t i = 0; i < args.size(); ++i) {
      if (args[i]->sort() != f.params[i].sort)
        throw NotInvariantProblem("sort mismatch applying '" + f.name + "'");
      subst[f.params[i].name] = args[i];
    }
    return f.body->substitute(subst);
  };
  auto inv_app = [&](const std::vector<TermPtr> &args) {
    return Term::raw_app(p.target.name, args, p.target.ret);
  };
  std::vector<TermPtr> both = xs;
  both.insert(both.end(), xps.begin(), xps.end());

  out.constraints.push_back(Term::app("=>", {apply_macro(pre, xs), inv_app(xs)}));
  out.constraints.push_back(Term::app(
      "=>", {Term::app("and", {inv_app(xs), apply_macro(trans, both)}), inv_app(xps)}));
  out.constraints.push_back(Term::app("=>", {inv_app(xs), apply_macro(post, xs)}));
  out.inv_expanded = true;
  return out;
}

} // namespace gsynth
