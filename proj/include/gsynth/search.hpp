#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>

#include "gsynth/eval.hpp"
#include "gsynth/pcfg.hpp"

namespace gsynth {

/// A partially derived program: a term with typed holes plus the rules
/// applied so far.
struct SententialForm {
  TermPtr form;
  Derivation derivation;

  bool complete() const { return form->is_complete(); }
  std::string key() const { return form->print(); }
};

struct SearchLimits {
  int max_depth = 12;
  uint64_t feedback_interval = 2000; // n: used only when a hook is armed
  std::optional<uint64_t> candidate_budget;
  std::optional<double> wall_clock_s;
  uint64_t seed = 0;
  bool sampler_smoothing = false; // top-down sampler uses the raw pCFG by default
  double gamma = 0.4;             // smoothing exponent
};

struct TraceEvent {
  enum Kind { Candidate, Pop, Feedback, Restart } kind;
  uint64_t iteration = 0;
  double f = 0.0;
  std::string detail;
};

using TraceSink = std::function<void(const TraceEvent &)>;

struct SearchStats {
  uint64_t candidates = 0;  // distinct completed programs checked
  uint64_t completions = 0; // completions including duplicates
  uint64_t pops = 0;
  uint64_t duplicates = 0;
  uint64_t stuck_completions = 0; // depth-limited samples with no terminal rule
  std::vector<uint64_t> feedback_iterations;
};

/// Grammar-update hook fired every n-th iteration (the syntactic
/// oracle). Receives the current weighted grammar, the partial program,
/// and the counterexamples; returns the updated grammar.
using FeedbackHook = std::function<WeightedGrammar(
    const WeightedGrammar &, const SententialForm &, const std::vector<Counterexample> &)>;

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

inline bool past(const Deadline &d) {
  return d && std::chrono::steady_clock::now() >= *d;
}

inline Deadline deadline_from_limit(const std::optional<double> &seconds) {
  if (!seconds)
    return std::nullopt;
  return std::chrono::steady_clock::now() +
         std::chrono::duration_cast<std::chrono::steady_clock::duration>(
             std::chrono::duration<double>(*seconds));
}

/// Deterministic RNG: the uniform draw is pinned to the mt19937_64
/// stream so replays are identical across platforms.
class Rng {
public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Samples an index from unnormalized nonnegative mass.
  size_t categorical(const std::vector<double> &mass) {
    double total = 0.0;
    for (double m : mass)
      total += m;
    if (total <= 0.0)
      throw EmptySupport("categorical distribution has no mass");
    double x = uniform() * total;
    double acc = 0.0;
    size_t last_positive = 0;
    for (size_t i = 0; i < mass.size(); ++i) {
      if (mass[i] <= 0.0)
        continue;
      last_positive = i;
      acc += mass[i];
      if (x < acc)
        return i;
    }
    return last_positive;
  }

private:
  std::mt19937_64 gen_;
};

namespace detail {

/// Replaces the left-most hole with a rule right-hand side.
inline TermPtr splice_leftmost(const TermPtr &t, const TermPtr &rhs, bool &done) {
  if (done)
    return t;
  if (t->is_hole()) {
    done = true;
    return rhs;
  }
  if (t->is_app()) {
    std::vector<TermPtr> args;
    args.reserve(t->args().size());
    bool changed = false;
    for (const TermPtr &a : t->args()) {
      if (done || a->is_complete()) {
        args.push_back(a);
        continue;
      }
      TermPtr na = splice_leftmost(a, rhs, done);
      changed |= na.get() != a.get();
      args.push_back(std::move(na));
    }
    if (!changed)
      return t;
    return Term::raw_app(t->op(), std::move(args), t->sort());
  }
  return t;
}

inline const Term *leftmost_hole(const Term &t) {
  if (t.is_hole())
    return &t;
  if (t.is_app())
    for (const TermPtr &a : t.args())
      if (!a->is_complete())
        return leftmost_hole(*a);
  return nullptr;
}

inline void collect_holes(const TermPtr &t, std::vector<int> &out) {
  if (t->is_hole())
    out.push_back(t->hole_nonterminal());
  else if (t->is_app())
    for (const TermPtr &a : t->args())
      if (!a->is_complete())
        collect_holes(a, out);
}

} // namespace detail

inline DefinedFunction as_candidate(const SynthProblem &p, TermPtr body) {
  return DefinedFunction{p.target.name, p.target.params, p.target.ret, std::move(body)};
}

} // namespace gsynth
