#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gsynth/grammar.hpp"

namespace gsynth {

enum class Logic { Lia, Bv, LiaInv };

inline std::string logic_name(Logic l) {
  switch (l) {
  case Logic::Lia:
    return "LIA";
  case Logic::Bv:
    return "BV";
  case Logic::LiaInv:
    return "LIA-with-invariant";
  }
  return "?";
}

struct Param {
  std::string name;
  Sort sort;
  bool operator==(const Param &o) const = default;
};

/// A defined (or, for the target, to-be-defined) function. The target's
/// body is null until synthesis succeeds.
struct DefinedFunction {
  std::string name;
  std::vector<Param> params;
  Sort ret;
  TermPtr body;

  std::string signature_header(Dialect d = Dialect::Smtlib) const {
    std::string out = d == Dialect::Smtlib ? "(define-fun " : "(defun ";
    out += name + " (";
    for (size_t i = 0; i < params.size(); ++i) {
      if (i > 0)
        out += ' ';
      if (d == Dialect::Smtlib)
        out += "(" + params[i].name + " " + params[i].sort.name() + ")";
      else
        out += params[i].name;
    }
    out += ")";
    if (d == Dialect::Smtlib)
      out += " " + ret.name();
    return out;
  }

  std::string print(Dialect d = Dialect::Smtlib) const {
    std::string out = signature_header(d) + "\n    ";
    out += body ? body->print(d, true) : "??";
    out += ")";
    return out;
  }
};

/// Names the four functions of an invariant-track problem before the
/// constraint expansion has run.
struct InvSpec {
  std::string inv, pre, trans, post;
};

/// A parsed SyGuS problem (Def. 4 style): theory, target signature,
/// universal variables, constraints over the target, and a grammar.
struct SynthProblem {
  Logic logic = Logic::Lia;
  DefinedFunction target;
  std::vector<Param> universals;
  std::vector<TermPtr> constraints;
  Grammar grammar;

  // Invariant-track plumbing.
  std::optional<InvSpec> inv_spec;
  std::map<std::string, DefinedFunction> macros;
  bool inv_expanded = false;

  bool is_invariant() const { return logic == Logic::LiaInv; }

  std::optional<Param> find_universal(const std::string &name) const {
    for (const Param &p : universals)
      if (p.name == name)
        return p;
    return std::nullopt;
  }
};

/// Bijective renaming between original and generic identifiers.
/// Universals and target formals are separate scopes: both may map to
/// vrK names, but they never appear in the same position of a term.
struct NameMap {
  std::string original_fn;
  std::map<std::string, std::string> var_fwd, var_bwd;     // universals
  std::map<std::string, std::string> param_fwd, param_bwd; // target formals

  bool is_identity() const {
    if (original_fn != "fn")
      return false;
    for (const auto &[k, v] : var_fwd)
      if (k != v)
        return false;
    for (const auto &[k, v] : param_fwd)
      if (k != v)
        return false;
    return true;
  }
};

} // namespace gsynth
