#pragma once

#include "gsynth/problem.hpp"

namespace gsynth {

/// Renames the target to "fn" and variables to vr0, vr1, ... so prompts
/// carry no meaning in their identifiers. Universals are numbered in
/// declaration order; target formals positionally. Renaming is
/// simultaneous, so originals that already look generic cannot collide.
inline std::pair<SynthProblem, NameMap> anonymize(const SynthProblem &p) {
  NameMap nm;
  nm.original_fn = p.target.name;

  std::map<std::string, std::string> var_map;
  for (size_t i = 0; i < p.universals.size(); ++i) {
    std::string generic = "vr" + std::to_string(i);
    nm.var_fwd[p.universals[i].name] = generic;
    nm.var_bwd[generic] = p.universals[i].name;
    var_map[p.universals[i].name] = generic;
  }
  std::map<std::string, std::string> param_map;
  for (size_t i = 0; i < p.target.params.size(); ++i) {
    std::string generic = "vr" + std::to_string(i);
    nm.param_fwd[p.target.params[i].name] = generic;
    nm.param_bwd[generic] = p.target.params[i].name;
    param_map[p.target.params[i].name] = generic;
  }
  std::map<std::string, std::string> op_map{{p.target.name, "fn"}};

  SynthProblem out;
  out.logic = p.logic;
  out.inv_spec = p.inv_spec;
  out.inv_expanded = p.inv_expanded;
  if (out.inv_spec)
    out.inv_spec->inv = "fn";

  out.target.name = "fn";
  out.target.ret = p.target.ret;
  for (size_t i = 0; i < p.target.params.size(); ++i)
    out.target.params.push_back({param_map[p.target.params[i].name], p.target.params[i].sort});
  if (p.target.body)
    out.target.body = p.target.body->rename(param_map, op_map);

  for (const Param &u : p.universals)
    out.universals.push_back({var_map[u.name], u.sort});

  for (const TermPtr &c : p.constraints)
    out.constraints.push_back(c->rename(var_map, op_map));

  // Grammar terminals name target formals, not universals.
  Grammar g;
  for (const Nonterminal &nt : p.grammar.nonterminals())
    g.add_nonterminal(nt.name, nt.sort);
  g.set_start(p.grammar.start());
  for (const Rule &r : p.grammar.rules())
    g.add_rule(r.lhs, r.rhs->rename(param_map, op_map));
  out.grammar = std::move(g);

  // Macro bodies may mention universals; formals shadow them.
  for (const auto &[name, f] : p.macros) {
    DefinedFunction nf = f;
    std::map<std::string, std::string> body_map = var_map;
    for (const Param &formal : f.params)
      body_map.erase(formal.name);
    nf.body = f.body ? f.body->rename(body_map, op_map) : nullptr;
    out.macros[name] = std::move(nf);
  }

  return {std::move(out), std::move(nm)};
}

/// Restores original identifiers in a problem produced by anonymize.
inline SynthProblem deanonymize(const SynthProblem &p, const NameMap &nm) {
  std::map<std::string, std::string> var_map = nm.var_bwd;
  std::map<std::string, std::string> param_map = nm.param_bwd;
  std::map<std::string, std::string> op_map{{"fn", nm.original_fn}};

  SynthProblem out;
  out.logic = p.logic;
  out.inv_spec = p.inv_spec;
  out.inv_expanded = p.inv_expanded;
  if (out.inv_spec)
    out.inv_spec->inv = nm.original_fn;

  out.target.name = nm.original_fn;
  out.target.ret = p.target.ret;
  for (const Param &q : p.target.params) {
    auto it = param_map.find(q.name);
    out.target.params.push_back({it != param_map.end() ? it->second : q.name, q.sort});
  }
  if (p.target.body)
    out.target.body = p.target.body->rename(param_map, op_map);

  for (const Param &u : p.universals) {
    auto it = var_map.find(u.name);
    out.universals.push_back({it != var_map.end() ? it->second : u.name, u.sort});
  }
  for (const TermPtr &c : p.constraints)
    out.constraints.push_back(c->rename(var_map, op_map));

  Grammar g;
  for (const Nonterminal &nt : p.grammar.nonterminals())
    g.add_nonterminal(nt.name, nt.sort);
  g.set_start(p.grammar.start());
  for (const Rule &r : p.grammar.rules())
    g.add_rule(r.lhs, r.rhs->rename(param_map, op_map));
  out.grammar = std::move(g);

  for (const auto &[name, f] : p.macros) {
    DefinedFunction nf = f;
    std::map<std::string, std::string> body_map = var_map;
    for (const Param &formal : f.params)
      body_map.erase(formal.name);
    nf.body = f.body ? f.body->rename(body_map, op_map) : nullptr;
    out.macros[name] = std::move(nf);
  }
  return out;
}

/// Restores original identifiers in a synthesized solution body.
inline DefinedFunction deanonymize_solution(const DefinedFunction &f, const NameMap &nm) {
  DefinedFunction out;
  out.name = nm.original_fn.empty() ? f.name : nm.original_fn;
  out.ret = f.ret;
  for (const Param &q : f.params) {
    auto it = nm.param_bwd.find(q.name);
    out.params.push_back({it != nm.param_bwd.end() ? it->second : q.name, q.sort});
  }
  if (f.body)
    out.body = f.body->rename(nm.param_bwd, {{"fn", out.name}});
  return out;
}

} // namespace gsynth
