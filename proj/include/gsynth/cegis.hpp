#pragma once

#include "gsynth/astar.hpp"
#include "gsynth/topdown.hpp"

namespace gsynth {

enum class Engine { TopDown, AStar };

struct SolveStats {
  uint64_t candidates_enumerated = 0;
  uint64_t verifier_calls = 0;
  uint64_t llm_calls = 0;
  uint64_t counterexamples = 0;
  double llm_seconds = 0.0;
  double search_seconds = 0.0;
  double verify_seconds = 0.0;
  double total_seconds = 0.0;
  std::vector<uint64_t> feedback_iterations;
};

struct SolveOutcome {
  enum Kind { Solved, TimedOut, Failed } kind = Failed;
  std::optional<DefinedFunction> solution;
  std::string reason; // TimedOut/Failed detail
  SolveStats stats;
  WeightedGrammar final_grammar;
  std::vector<Counterexample> counterexamples;
};

namespace detail {

class StopWatch {
public:
  StopWatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

} // namespace detail

/// CEGIS with weighted search: alternate Enumerate and verify, growing
/// the counterexample set until a candidate verifies or a budget runs
/// out. Unknown verdicts blacklist the candidate and continue.
inline SolveOutcome cegis(WeightedGrammar wg, const SynthProblem &p, Engine engine,
                          const SearchLimits &limits, const FeedbackHook &feedback,
                          const SmtSolver &solver, FeedbackState *feedback_state = nullptr,
                          const TraceSink &trace = {}) {
  SolveOutcome out;
  out.final_grammar = wg;
  detail::StopWatch total;
  Deadline deadline = deadline_from_limit(limits.wall_clock_s);
  Rng rng(limits.seed);
  SearchStats search_stats;
  std::vector<Counterexample> cexs;
  std::unordered_set<std::string> blacklist; // Unknown-verdict candidates

  // Feedback updates must survive across Enumerate calls, so the hook
  // is wrapped to snapshot the latest grammar.
  FeedbackHook hook;
  if (feedback)
    hook = [&](const WeightedGrammar &cur, const SententialForm &s,
               const std::vector<Counterexample> &cs) {
      WeightedGrammar next = feedback(cur, s, cs);
      wg = next;
      out.final_grammar = next;
      return next;
    };

  auto finish = [&](SolveOutcome::Kind kind, std::string reason) {
    out.kind = kind;
    out.reason = std::move(reason);
    out.stats.candidates_enumerated = search_stats.candidates;
    out.stats.feedback_iterations = search_stats.feedback_iterations;
    out.stats.counterexamples = cexs.size();
    out.stats.total_seconds = total.seconds();
    if (feedback_state)
      out.stats.llm_calls = feedback_state->llm_calls;
    out.counterexamples = cexs;
    return out;
  };

  while (true) {
    if (past(deadline))
      return finish(SolveOutcome::TimedOut, "wall clock exhausted");

    TermPtr body;
    detail::StopWatch search;
    try {
      if (engine == Engine::TopDown) {
        auto previous = blacklist; // per-call duplicate set, pre-seeded
        body = topdown_enumerate(wg, p, cexs, limits, hook, search_stats, rng, deadline,
                                 trace, &previous);
      } else {
        body = astar_enumerate(wg, p, cexs, limits, hook, search_stats, deadline, trace,
                               &blacklist);
      }
    } catch (const TimedOut &e) {
      out.stats.search_seconds += search.seconds();
      return finish(SolveOutcome::TimedOut, e.what());
    } catch (const Error &e) {
      out.stats.search_seconds += search.seconds();
      return finish(SolveOutcome::Failed, e.what());
    }
    out.stats.search_seconds += search.seconds();

    DefinedFunction candidate = as_candidate(p, body);
    // Enumerate's contract: returned programs already pass every stored
    // counterexample.
    if (!check_cex(candidate, p, cexs))
      return finish(SolveOutcome::Failed,
                    "internal error: enumerator returned a candidate that fails a stored "
                    "counterexample");

    Verdict verdict;
    detail::StopWatch verify;
    try {
      verdict = solver.verify(candidate, p);
    } catch (const Error &e) {
      out.stats.verify_seconds += verify.seconds();
      ++out.stats.verifier_calls;
      return finish(SolveOutcome::Failed, e.what());
    }
    out.stats.verify_seconds += verify.seconds();
    ++out.stats.verifier_calls;

    if (verdict.valid()) {
      out.solution = std::move(candidate);
      return finish(SolveOutcome::Solved, {});
    }
    if (verdict.invalid()) {
      bool duplicate = false;
      for (const Counterexample &c : cexs)
        duplicate |= (c == verdict.cex);
      if (duplicate)
        return finish(SolveOutcome::Failed,
                      "verifier returned a counterexample the candidate already passes; "
                      "interpreter and solver disagree");
      cexs.push_back(verdict.cex);
      if (feedback_state) {
        feedback_state->last_failed = candidate;
        feedback_state->last_cex = verdict.cex;
      }
    } else {
      // Unknown: no counterexample to learn from; never try this
      // candidate again.
      blacklist.insert(body->print());
    }
  }
}

} // namespace gsynth
