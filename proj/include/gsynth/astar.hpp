#pragma once

#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "gsynth/search.hpp"

namespace gsynth {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Path cost c(x): sum of -log2 P over the derivation; +inf as soon as
/// any rule has zero probability.
inline double astar_cost(const Derivation &d, const ProbGrammar &pg) {
  double c = 0.0;
  for (int rid : d) {
    double p = pg.prob[rid];
    if (p <= 0.0)
      return kInf;
    c -= std::log2(p);
  }
  return c;
}

/// Heuristic g(x): 0 for complete forms, otherwise the sum of -log2 h
/// over the remaining holes; +inf when some hole can never terminate.
inline double astar_heuristic(const SententialForm &s, const HeuristicTable &table) {
  if (s.complete())
    return 0.0;
  std::vector<int> holes;
  detail::collect_holes(s.form, holes);
  double g = 0.0;
  for (int nt : holes) {
    double h = table.h.at(nt);
    if (h <= 0.0)
      return kInf;
    g -= std::log2(h);
  }
  return g;
}

/// Weighted A* over the grammar tree: pops minimal f = c + g, expands
/// the left-most hole with every finite-cost rule, and returns the
/// first popped complete program consistent with the counterexamples.
/// The feedback hook (every n-th pop) rebuilds the pCFG and heuristic
/// and re-keys the whole frontier.
inline TermPtr astar_enumerate(WeightedGrammar wg, const SynthProblem &p,
                               const std::vector<Counterexample> &cexs,
                               const SearchLimits &limits, const FeedbackHook &feedback,
                               SearchStats &stats, const Deadline &deadline,
                               const TraceSink &trace = {},
                               const std::unordered_set<std::string> *blacklist = nullptr) {
  ProbGrammar pg = build_pcfg(smooth(wg, limits.gamma));
  HeuristicTable table = heuristic_fixpoint(pg);

  struct Entry {
    double f = 0.0;
    double cost = 0.0;
    uint64_t seq = 0; // FIFO tie-break among equal f
    SententialForm s;
  };
  struct Worse {
    bool operator()(const Entry &a, const Entry &b) const {
      if (a.f != b.f)
        return a.f > b.f;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Worse> open;
  std::unordered_map<std::string, double> best_cost; // dominance over identical forms
  std::unordered_set<std::string> closed;
  uint64_t seq = 0;

  auto push = [&](SententialForm s, double cost) {
    double g = astar_heuristic(s, table);
    if (cost == kInf || g == kInf)
      return;
    std::string key = s.key();
    if (closed.count(key))
      return;
    auto it = best_cost.find(key);
    if (it != best_cost.end() && it->second <= cost)
      return;
    best_cost[key] = cost;
    open.push(Entry{cost + g, cost, seq++, std::move(s)});
  };

  push(SententialForm{pg.grammar.start_hole(), {}}, 0.0);

  for (uint64_t i = 0;; ++i) {
    if (past(deadline))
      throw TimedOut("A* enumeration hit the wall clock");

    Entry cur;
    while (true) {
      if (open.empty())
        throw Exhausted("A* frontier is empty");
      cur = open.top();
      open.pop();
      std::string key = cur.s.key();
      if (closed.count(key))
        continue; // stale duplicate left behind by dominance updates
      auto it = best_cost.find(key);
      if (it != best_cost.end() && it->second < cur.cost)
        continue;
      closed.insert(std::move(key));
      break;
    }
    ++stats.pops;
    if (trace)
      trace({TraceEvent::Pop, stats.pops, cur.f, cur.s.form->print()});

    if (cur.s.complete() && !(blacklist && blacklist->count(cur.s.form->print()))) {
      if (limits.candidate_budget && stats.candidates >= *limits.candidate_budget)
        throw BudgetExhausted("candidate budget of " +
                              std::to_string(*limits.candidate_budget) + " exhausted");
      ++stats.candidates;
      ++stats.completions;
      if (trace)
        trace({TraceEvent::Candidate, stats.candidates, cur.f, {}});
      if (check_cex(as_candidate(p, cur.s.form), p, cexs))
        return cur.s.form;
    }

    if (feedback && i % limits.feedback_interval == 0) {
      stats.feedback_iterations.push_back(i);
      if (trace)
        trace({TraceEvent::Feedback, i, cur.f, cur.s.form->print(Dialect::Smtlib, true)});
      wg = feedback(wg, cur.s, cexs);
      pg = build_pcfg(smooth(wg, limits.gamma));
      table = heuristic_fixpoint(pg);
      // Re-key every frontier entry under the new tables.
      std::priority_queue<Entry, std::vector<Entry>, Worse> fresh;
      best_cost.clear();
      while (!open.empty()) {
        Entry e = open.top();
        open.pop();
        std::string key = e.s.key();
        if (closed.count(key))
          continue;
        double cost = astar_cost(e.s.derivation, pg);
        double g = astar_heuristic(e.s, table);
        if (cost == kInf || g == kInf)
          continue;
        auto it = best_cost.find(key);
        if (it != best_cost.end() && it->second <= cost)
          continue;
        best_cost[key] = cost;
        fresh.push(Entry{cost + g, cost, e.seq, std::move(e.s)});
      }
      open = std::move(fresh);
    }

    if (!cur.s.complete()) {
      const Term *hole = detail::leftmost_hole(*cur.s.form);
      int nt = hole->hole_nonterminal();
      for (int rid : pg.grammar.rules_of(nt)) {
        double prob = pg.prob[rid];
        if (prob <= 0.0)
          continue; // infinite edge weight: never enqueued
        bool done = false;
        SententialForm child;
        child.form = detail::splice_leftmost(cur.s.form, pg.grammar.rule(rid).rhs, done);
        child.derivation = cur.s.derivation;
        child.derivation.push_back(rid);
        push(std::move(child), cur.cost - std::log2(prob));
      }
    }
  }
}

} // namespace gsynth
