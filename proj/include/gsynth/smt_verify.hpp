#pragma once

#include <iostream>

#include "gsynth/eval.hpp"
#include "gsynth/sexpr.hpp"
#include "gsynth/subprocess.hpp"
#include "gsynth/sygus_parser.hpp"

namespace gsynth {

/// External SMT solver spoken to over stdin/stdout, one process per
/// query (one-shot, SMT-LIB v2 with produce-models).
struct SolverConfig {
  std::vector<std::string> command; // e.g. {"z3", "-in"}
  double query_timeout_s = 30.0;
  bool log_queries = false;
  std::ostream *diag = &std::cerr;
};

struct Verdict {
  enum Kind { Valid, Invalid, Unknown } kind = Unknown;
  Counterexample cex;  // Invalid only
  std::string reason;  // Unknown only

  bool valid() const { return kind == Valid; }
  bool invalid() const { return kind == Invalid; }
};

namespace detail {

inline Value parse_model_value(const SExpr &e, const Sort &sort) {
  if (e.is_atom()) {
    if (auto v = parse_literal_atom(e.atom()))
      return *v;
  } else if (e.size() == 2 && e[0].is("-") && e[1].is_atom() && is_numeral(e[1].atom())) {
    return Value(BigInt("-" + e[1].atom()));
  } else if (e.size() == 3 && e[0].is("_")) {
    const std::string &a = e[1].atom();
    if (a.size() > 2 && a.substr(0, 2) == "bv" && is_numeral(a.substr(2)))
      return Value(BvVal(static_cast<unsigned>(std::stoul(e[2].atom())),
                         std::stoull(a.substr(2))));
  }
  throw ProtocolError("cannot parse model value '" + e.to_string() + "' for sort " +
                      sort.name());
}

inline Value default_value(const Sort &s) {
  if (s.is_bool())
    return Value(false);
  if (s.is_bv())
    return Value(BvVal(s.width, 0));
  return Value(BigInt(0));
}

/// Extracts define-fun bindings from a (get-model) reply; accepts both
/// the bare "((define-fun ...))" and the legacy "(model ...)" wrapping.
inline std::map<std::string, SExpr> parse_model_bindings(const std::vector<SExpr> &exprs) {
  std::map<std::string, SExpr> bindings;
  for (const SExpr &e : exprs) {
    if (!e.is_list())
      continue;
    size_t begin = 0;
    if (e.size() > 0 && e[0].is("model"))
      begin = 1;
    for (size_t i = begin; i < e.size(); ++i) {
      const SExpr &d = e[i];
      if (d.is_list() && d.size() == 5 && d[0].is("define-fun") && d[1].is_atom() &&
          d[2].is_list() && d[2].size() == 0)
        bindings.emplace(d[1].atom(), d[4]);
    }
  }
  return bindings;
}

} // namespace detail

class SmtSolver {
public:
  explicit SmtSolver(SolverConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.command.empty())
      throw Error("no SMT solver configured");
  }

  const SolverConfig &config() const { return cfg_; }

  /// Raw one-shot query; returns solver stdout.
  std::string raw_query(const std::string &script) const {
    if (cfg_.log_queries && cfg_.diag)
      (*cfg_.diag) << ";; smt query\n" << script << "\n";
    SubprocessResult r = run_subprocess(cfg_.command, script, cfg_.query_timeout_s);
    if (r.timed_out)
      throw TimedOut("solver query timed out after " +
                     std::to_string(cfg_.query_timeout_s) + "s");
    if (r.out.empty() && r.exit_code != 0) {
      std::string excerpt = r.err.substr(0, 400);
      throw SolverCrashed("solver exited with status " + std::to_string(r.exit_code) +
                          (excerpt.empty() ? "" : (": " + excerpt)));
    }
    if (cfg_.log_queries && cfg_.diag)
      (*cfg_.diag) << ";; smt reply\n" << r.out << "\n";
    return r.out;
  }

  /// Checks a candidate against the problem: unsat of the negated
  /// specification means Valid; sat yields the model projected onto the
  /// universals; solver timeout or unknown yields Unknown.
  Verdict verify(const DefinedFunction &candidate, const SynthProblem &p) const {
    std::string script = verification_query(candidate, p);
    std::string out;
    try {
      out = raw_query(script);
    } catch (const TimedOut &e) {
      return {Verdict::Unknown, {}, e.what()};
    }

    // First token decides; the rest is the model (when sat).
    size_t pos = out.find_first_not_of(" \t\r\n");
    if (pos == std::string::npos)
      throw ProtocolError("empty solver reply");
    size_t end = out.find_first_of(" \t\r\n", pos);
    std::string head = out.substr(pos, end == std::string::npos ? end : end - pos);

    if (head == "unsat")
      return {Verdict::Valid, {}, {}};
    if (head == "unknown")
      return {Verdict::Unknown, {}, "solver returned unknown"};
    if (head != "sat")
      throw ProtocolError("unexpected solver reply: " + out.substr(pos, 200));

    Counterexample cex;
    std::map<std::string, SExpr> bindings;
    try {
      bindings = detail::parse_model_bindings(
          parse_sexprs(end == std::string::npos ? "" : out.substr(end)));
    } catch (const ParseError &e) {
      throw ProtocolError(std::string("unparseable model: ") + e.what());
    }
    for (const Param &u : p.universals) {
      auto it = bindings.find(u.name);
      // Don't-care variables absent from the model default to zero.
      cex.valuation[u.name] = it == bindings.end()
                                  ? detail::default_value(u.sort)
                                  : detail::parse_model_value(it->second, u.sort);
    }
    return {Verdict::Invalid, std::move(cex), {}};
  }

  /// Builds the verification script: define-fun for the candidate,
  /// declare the universals, assert the negated constraint conjunction.
  static std::string verification_query(const DefinedFunction &candidate,
                                        const SynthProblem &p) {
    std::string q = "(set-option :produce-models true)\n(set-logic ALL)\n";
    q += candidate.print() + "\n";
    for (const Param &u : p.universals)
      q += "(declare-const " + u.name + " " + u.sort.name() + ")\n";
    if (p.constraints.empty()) {
      q += "(assert (not true))\n";
    } else if (p.constraints.size() == 1) {
      q += "(assert (not " + p.constraints[0]->print() + "))\n";
    } else {
      q += "(assert (not (and";
      for (const TermPtr &c : p.constraints)
        q += " " + c->print();
      q += ")))\n";
    }
    q += "(check-sat)\n(get-model)\n";
    return q;
  }

  /// Evaluates ground terms in one batched query via get-value; the
  /// oracle side of the interpreter-agreement checks.
  std::vector<Value> eval_terms(const std::vector<TermPtr> &ground_terms) const {
    std::vector<Value> values;
    if (ground_terms.empty())
      return values;
    std::string q = "(set-logic ALL)\n(check-sat)\n(get-value (";
    for (size_t i = 0; i < ground_terms.size(); ++i) {
      if (i > 0)
        q += ' ';
      q += ground_terms[i]->print();
    }
    q += "))\n";
    std::string out = raw_query(q);
    size_t pos = out.find_first_not_of(" \t\r\n");
    if (pos == std::string::npos || out.compare(pos, 3, "sat") != 0)
      throw ProtocolError("get-value query did not return sat: " + out.substr(0, 200));
    std::vector<SExpr> replies = parse_sexprs(out.substr(pos + 3));
    if (replies.size() != 1 || !replies[0].is_list() ||
        replies[0].size() != ground_terms.size())
      throw ProtocolError("malformed get-value reply");
    for (size_t i = 0; i < ground_terms.size(); ++i) {
      const SExpr &pair = replies[0][static_cast<int>(i)];
      if (!pair.is_list() || pair.size() != 2)
        throw ProtocolError("malformed get-value pair");
      values.push_back(detail::parse_model_value(pair[1], ground_terms[i]->sort()));
    }
    return values;
  }

private:
  SolverConfig cfg_;
};

} // namespace gsynth
