#pragma once

#include <unordered_set>

#include "gsynth/search.hpp"

namespace gsynth {

/// One sampling pass: every hole present at entry is expanded once by a
/// rule drawn from the categorical distribution of its nonterminal.
/// Holes introduced by this pass are left for the next one.
inline SententialForm replace_nonterminals(const SententialForm &s, const ProbGrammar &pg,
                                           Rng &rng) {
  Derivation applied;
  std::function<TermPtr(const TermPtr &)> expand = [&](const TermPtr &t) -> TermPtr {
    if (t->is_hole()) {
      int nt = t->hole_nonterminal();
      const auto &rids = pg.grammar.rules_of(nt);
      std::vector<double> mass;
      mass.reserve(rids.size());
      for (int rid : rids)
        mass.push_back(pg.prob[rid]);
      size_t pick;
      try {
        pick = rng.categorical(mass);
      } catch (const EmptySupport &) {
        throw EmptySupport("nonterminal " + pg.grammar.nonterminal(nt).name +
                           " has no positive-probability rule");
      }
      applied.push_back(rids[pick]);
      return pg.grammar.rule(rids[pick]).rhs;
    }
    if (t->is_app() && !t->is_complete()) {
      std::vector<TermPtr> args;
      args.reserve(t->args().size());
      for (const TermPtr &a : t->args())
        args.push_back(expand(a));
      return Term::raw_app(t->op(), std::move(args), t->sort());
    }
    return t;
  };
  SententialForm out;
  out.form = expand(s.form);
  out.derivation = s.derivation;
  out.derivation.insert(out.derivation.end(), applied.begin(), applied.end());
  return out;
}

/// Forces completion: every hole is filled with a terminal-only rule
/// drawn from the terminal distribution.
inline SententialForm complete_program(const SententialForm &s, const ProbGrammar &pg,
                                       Rng &rng) {
  Derivation applied;
  std::function<TermPtr(const TermPtr &)> fill = [&](const TermPtr &t) -> TermPtr {
    if (t->is_hole()) {
      int nt = t->hole_nonterminal();
      const auto &rids = pg.grammar.rules_of(nt);
      std::vector<double> mass;
      mass.reserve(rids.size());
      for (int rid : rids)
        mass.push_back(pg.prob_terminal[rid]);
      size_t pick;
      try {
        pick = rng.categorical(mass);
      } catch (const EmptySupport &) {
        throw EmptySupport("nonterminal " + pg.grammar.nonterminal(nt).name +
                           " has no terminal-only rule with positive probability");
      }
      applied.push_back(rids[pick]);
      return pg.grammar.rule(rids[pick]).rhs;
    }
    if (t->is_app() && !t->is_complete()) {
      std::vector<TermPtr> args;
      args.reserve(t->args().size());
      for (const TermPtr &a : t->args())
        args.push_back(fill(a));
      return Term::raw_app(t->op(), std::move(args), t->sort());
    }
    return t;
  };
  SententialForm out;
  out.form = fill(s.form);
  out.derivation = s.derivation;
  out.derivation.insert(out.derivation.end(), applied.begin(), applied.end());
  return out;
}

/// Probabilistic top-down enumerator. Samples programs from the pCFG,
/// restarting on duplicates and counterexample failures; returns the
/// first complete program consistent with the stored counterexamples.
/// When a feedback hook is armed it fires every n-th iteration and the
/// pCFG is rebuilt from the returned weighted grammar.
inline TermPtr topdown_enumerate(WeightedGrammar wg, const SynthProblem &p,
                                 const std::vector<Counterexample> &cexs,
                                 const SearchLimits &limits, const FeedbackHook &feedback,
                                 SearchStats &stats, Rng &rng, const Deadline &deadline,
                                 const TraceSink &trace = {},
                                 std::unordered_set<std::string> *blacklist = nullptr) {
  auto rebuild = [&]() {
    return build_pcfg(limits.sampler_smoothing ? smooth(wg, limits.gamma) : wg);
  };
  ProbGrammar pg = rebuild();

  std::unordered_set<std::string> local_previous;
  std::unordered_set<std::string> &previous = blacklist ? *blacklist : local_previous;

  SententialForm prog{pg.grammar.start_hole(), {}};
  auto restart = [&](int &d) {
    prog = SententialForm{pg.grammar.start_hole(), {}};
    d = 0;
    if (trace)
      trace({TraceEvent::Restart, stats.completions, 0.0, {}});
  };

  int d = 0;
  for (uint64_t i = 0;; ++i) {
    if (past(deadline))
      throw TimedOut("top-down enumeration hit the wall clock");

    if (prog.complete()) {
      ++stats.completions;
      std::string key = prog.key();
      if (previous.count(key)) {
        ++stats.duplicates;
        restart(d);
      } else {
        previous.insert(key);
        if (limits.candidate_budget && stats.candidates >= *limits.candidate_budget)
          throw BudgetExhausted("candidate budget of " +
                                std::to_string(*limits.candidate_budget) + " exhausted");
        ++stats.candidates;
        if (trace)
          trace({TraceEvent::Candidate, stats.candidates, 0.0, key});
        if (check_cex(as_candidate(p, prog.form), p, cexs))
          return prog.form;
        restart(d);
      }
    }

    if (feedback && i % limits.feedback_interval == 0) {
      stats.feedback_iterations.push_back(i);
      if (trace)
        trace({TraceEvent::Feedback, i, 0.0, prog.form->print(Dialect::Smtlib, true)});
      wg = feedback(wg, prog, cexs);
      // Augmentation only appends rules, so the partial program and its
      // derivation stay valid under the rebuilt pCFG.
      pg = rebuild();
    }

    prog = replace_nonterminals(prog, pg, rng);
    ++d;
    if (d >= limits.max_depth) {
      try {
        prog = complete_program(prog, pg, rng);
      } catch (const EmptySupport &) {
        // A hole whose nonterminal has no terminal-only rule cannot be
        // force-completed; abandon the sample.
        ++stats.stuck_completions;
        restart(d);
      }
    }
  }
}

} // namespace gsynth
