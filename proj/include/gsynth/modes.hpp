#pragma once

#include <memory>
#include <sstream>

#include "gsynth/anonymize.hpp"
#include "gsynth/config.hpp"
#include "gsynth/feedback.hpp"
#include "gsynth/inv_expand.hpp"
#include "gsynth/run_record.hpp"
#include "gsynth/solver_discovery.hpp"

namespace gsynth {

/// The experimental modes: stand-alone LLM, LLM-seeded pCFG search with
/// either enumerator, their unions, integrated-LLM search, and the
/// unguided baselines.
enum class Mode {
  LlmOnly,
  EPcfg,
  AstarPcfg,
  LlmThenEPcfg,
  LlmThenAstarPcfg,
  EIllm,
  AstarIllm,
  EnumBaseline,
  AstarBaseline
};

inline const std::vector<std::pair<std::string, Mode>> &mode_table() {
  static const std::vector<std::pair<std::string, Mode>> table = {
      {"llm-only", Mode::LlmOnly},
      {"e-pcfg", Mode::EPcfg},
      {"astar-pcfg", Mode::AstarPcfg},
      {"llm-then-e-pcfg", Mode::LlmThenEPcfg},
      {"llm-then-astar-pcfg", Mode::LlmThenAstarPcfg},
      {"e-illm", Mode::EIllm},
      {"astar-illm", Mode::AstarIllm},
      {"enum-baseline", Mode::EnumBaseline},
      {"astar-baseline", Mode::AstarBaseline}};
  return table;
}

inline std::string mode_name(Mode m) {
  for (const auto &[name, mode] : mode_table())
    if (mode == m)
      return name;
  return "?";
}

inline std::optional<Mode> parse_mode(const std::string &name) {
  for (const auto &[n, mode] : mode_table())
    if (n == name)
      return mode;
  return std::nullopt;
}

inline bool mode_uses_llm(Mode m) {
  switch (m) {
  case Mode::EnumBaseline:
  case Mode::AstarBaseline:
    return false;
  case Mode::EPcfg:
  case Mode::AstarPcfg:
    return true; // for seeding, unless a weights file is given
  default:
    return true;
  }
}

inline std::optional<Engine> mode_engine(Mode m) {
  switch (m) {
  case Mode::LlmOnly:
    return std::nullopt;
  case Mode::EPcfg:
  case Mode::LlmThenEPcfg:
  case Mode::EIllm:
  case Mode::EnumBaseline:
    return Engine::TopDown;
  default:
    return Engine::AStar;
  }
}

inline bool mode_integrated_llm(Mode m) { return m == Mode::EIllm || m == Mode::AstarIllm; }

inline bool mode_standalone_first(Mode m) {
  return m == Mode::LlmOnly || m == Mode::LlmThenEPcfg || m == Mode::LlmThenAstarPcfg;
}

inline bool mode_collects_weights(Mode m) {
  return m == Mode::EPcfg || m == Mode::AstarPcfg || m == Mode::LlmThenEPcfg ||
         m == Mode::LlmThenAstarPcfg;
}

/// A run is repeat-worthy when it draws random samples or talks to a
/// sampled model.
inline bool mode_nondeterministic(Mode m, const Config &cfg) {
  if (mode_engine(m) == Engine::TopDown)
    return true;
  if (mode_uses_llm(m) && cfg.backend_configured && cfg.backend.kind == BackendConfig::Remote)
    return true;
  return false;
}

inline double mode_default_temperature(Mode m) {
  return m == Mode::AstarIllm ? 0.0 : 1.0;
}

namespace detail {

inline std::string read_text_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string benchmark_label(const std::string &path) {
  size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

} // namespace detail

/// Runs one benchmark in one mode under one configuration.
inline RunRecord solve_command(const std::string &path, Mode mode, const Config &user_cfg) {
  Config cfg = user_cfg;
  detail::StopWatch total;

  RunRecord rec;
  rec.benchmark = detail::benchmark_label(path);
  rec.mode = mode_name(mode);
  rec.seed = cfg.seed;

  // Frontend pipeline: parse, expand invariants, anonymize.
  SynthProblem original = parse_problem(detail::read_text_file(path));
  if (original.inv_spec && !original.inv_expanded)
    original = expand_inv_constraints(original);
  auto [problem, names] = anonymize(original);

  SolverConfig solver_cfg = cfg.solver;
  if (solver_cfg.command.empty())
    solver_cfg.command = discover_solver_command();
  solver_cfg.query_timeout_s = cfg.solver_timeout_s;
  solver_cfg.log_queries = cfg.verbose;
  SmtSolver solver(solver_cfg);

  cfg.backend.temperature = cfg.temperature.value_or(mode_default_temperature(mode));

  std::unique_ptr<Backend> backend;
  if (mode_uses_llm(mode) && cfg.backend_configured) {
    if (cfg.backend.kind == BackendConfig::Mock)
      backend = std::make_unique<MockBackend>(cfg.backend);
    else
      backend = std::make_unique<HttpBackend>(cfg.backend);
  }
  if (mode_integrated_llm(mode) && !backend)
    throw Error("mode " + rec.mode + " needs an LLM backend; configure one");
  if (mode == Mode::LlmOnly && !backend)
    throw Error("mode llm-only needs an LLM backend; configure one");

  Deadline global_deadline = deadline_from_limit(cfg.timeout_s);

  auto finalize = [&](SolveOutcome::Kind kind, const std::optional<DefinedFunction> &solution,
                      const std::string &reason, const SolveStats &stats) {
    rec.outcome = kind == SolveOutcome::Solved   ? "solved"
                  : kind == SolveOutcome::TimedOut ? "timeout"
                                                   : "failed";
    rec.solved = kind == SolveOutcome::Solved;
    rec.failure_reason = reason;
    rec.candidates_enumerated = stats.candidates_enumerated;
    rec.verifier_calls = stats.verifier_calls;
    rec.llm_calls = stats.llm_calls;
    rec.llm_seconds = stats.llm_seconds;
    rec.search_seconds = stats.search_seconds;
    rec.verify_seconds = stats.verify_seconds;
    if (solution) {
      // Independent re-verification of the de-anonymized solution
      // against the original problem, with a fresh solver process.
      DefinedFunction restored = deanonymize_solution(*solution, names);
      Verdict recheck = SmtSolver(solver_cfg).verify(restored, original);
      if (!recheck.valid()) {
        rec.outcome = "failed";
        rec.solved = false;
        rec.failure_reason = "solution failed independent re-verification";
      } else {
        rec.solution = restored.print();
      }
    }
    rec.elapsed_s = total.seconds();
    return rec;
  };

  SolveStats phase_stats;

  // Phase 1: stand-alone prompting (llm-only and the union modes), or
  // weight collection for the pCFG modes.
  std::vector<DefinedFunction> collected;
  if (backend && (mode_standalone_first(mode) ||
                  (mode_collects_weights(mode) && cfg.weights_file.empty()))) {
    detail::StopWatch llm_phase;
    StandaloneOptions opts;
    StandaloneResult sr = standalone_solve(problem, *backend, solver, opts, nullptr,
                                           global_deadline);
    phase_stats.llm_seconds = llm_phase.seconds();
    phase_stats.llm_calls = sr.llm_calls;
    phase_stats.verifier_calls = sr.verifier_calls;
    collected = sr.collected;
    if (sr.solution) {
      if (mode_standalone_first(mode))
        return finalize(SolveOutcome::Solved, sr.solution, {}, phase_stats);
      collected.push_back(*sr.solution); // still a proposed program
    } else if (mode == Mode::LlmOnly) {
      return finalize(SolveOutcome::Failed, std::nullopt,
                      "no valid solution within " + std::to_string(opts.max_attempts) +
                          " attempts",
                      phase_stats);
    }
  }

  // Phase 2: weighted CEGIS.
  Engine engine = *mode_engine(mode);
  WeightedGrammar wg = WeightedGrammar::all_ones(problem.grammar);
  if (mode_collects_weights(mode)) {
    if (!cfg.weights_file.empty()) {
      wg = load_weights(problem.grammar, cfg.weights_file);
    } else if (!collected.empty()) {
      std::vector<TermPtr> bodies;
      for (const DefinedFunction &f : collected)
        if (f.body)
          bodies.push_back(f.body);
      size_t skipped = 0;
      wg = weights_from_programs(problem.grammar, bodies, &skipped);
      if (skipped && cfg.verbose)
        std::cerr << "note: " << skipped << " collected programs fell outside the grammar\n";
    } else if (cfg.verbose) {
      std::cerr << "note: no weights file and no LLM; falling back to all-ones weights\n";
    }
  }

  // The raw pCFG needs every reachable nonterminal to carry mass; if
  // the seeded weights are degenerate, the sampler runs smoothed.
  SearchLimits limits = cfg.limits;
  limits.seed = cfg.seed;
  if (engine == Engine::TopDown && !limits.sampler_smoothing) {
    try {
      build_pcfg(wg);
    } catch (const DegenerateDistribution &) {
      if (cfg.verbose)
        std::cerr << "note: seeded weights are degenerate; smoothing the sampler pCFG\n";
      limits.sampler_smoothing = true;
    }
  }

  double remaining = cfg.timeout_s - total.seconds();
  limits.wall_clock_s = std::max(0.0, remaining);

  FeedbackState fstate;
  fstate.llm_calls = phase_stats.llm_calls;
  FeedbackHook hook;
  if (mode_integrated_llm(mode)) {
    Backend *b = backend.get();
    const SynthProblem *prob = &problem;
    FeedbackState *fs = &fstate;
    std::ostream *warn = cfg.verbose ? &std::cerr : nullptr;
    hook = [b, prob, fs, warn](const WeightedGrammar &cur, const SententialForm &s,
                               const std::vector<Counterexample> &cexs) {
      return syntactic_feedback(cur, s, cexs, *prob, *b, *fs, warn);
    };
  }

  TraceSink trace;
  if (cfg.trace)
    trace = [](const TraceEvent &e) {
      const char *kind = e.kind == TraceEvent::Candidate ? "candidate"
                         : e.kind == TraceEvent::Pop      ? "pop"
                         : e.kind == TraceEvent::Feedback ? "feedback"
                                                          : "restart";
      std::cerr << "trace " << kind << " i=" << e.iteration << " f=" << e.f << " "
                << e.detail << "\n";
    };

  SolveOutcome outcome =
      cegis(std::move(wg), problem, engine, limits, hook, solver,
            mode_integrated_llm(mode) ? &fstate : nullptr, trace);

  SolveStats stats = outcome.stats;
  stats.llm_seconds += phase_stats.llm_seconds;
  stats.llm_calls = mode_integrated_llm(mode) ? fstate.llm_calls : phase_stats.llm_calls;
  stats.verifier_calls += phase_stats.verifier_calls;
  return finalize(outcome.kind, outcome.solution, outcome.reason, stats);
}

} // namespace gsynth
