// gsynth: SyGuS solver combining enumerative search over weighted
// grammars with guidance from a large language model.

#include <iostream>

#include <CLI11.hpp>

#include "gsynth/bench.hpp"
#include "gsynth/printer.hpp"

using namespace gsynth;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string solver_cmd;
  std::string backend_kind;
  std::string mock_script;
  std::string endpoint;
  std::string model;
  std::string transcript;
  double temperature = -1.0;
  uint64_t seed = 0;
  bool seed_set = false;
  double timeout_s = -1.0;
  double solver_timeout_s = -1.0;
  int max_depth = -1;
  int64_t feedback_interval = -1;
  int64_t candidate_budget = -1;
  double gamma = -1.0;
  bool smooth_sampler = false;
  std::string weights_file;
  std::string results_file;
  bool verbose = false;
  bool trace = false;
};

void add_common_flags(CLI::App *cmd, CommonFlags &f) {
  cmd->add_option("--config", f.config_path, "JSON configuration file");
  cmd->add_option("--solver", f.solver_cmd,
                  "SMT solver command line (default: auto-discover z3, cvc5, or the "
                  "bundled WASM shim)");
  cmd->add_option("--backend", f.backend_kind, "LLM backend kind: mock | remote");
  cmd->add_option("--mock-script", f.mock_script, "reply script for the mock backend");
  cmd->add_option("--endpoint", f.endpoint, "chat-completion URL for the remote backend");
  cmd->add_option("--model", f.model, "model identifier for the remote backend");
  cmd->add_option("--temperature", f.temperature, "sampling temperature (default per mode)");
  cmd->add_option("--transcript", f.transcript, "append prompts/responses to this file");
  cmd->add_option("--seed", f.seed, "random seed")->each([&](const std::string &) {
    f.seed_set = true;
  });
  cmd->add_option("--timeout", f.timeout_s, "global wall clock per run, seconds");
  cmd->add_option("--solver-timeout", f.solver_timeout_s, "per-query solver timeout, seconds");
  cmd->add_option("--max-depth", f.max_depth, "sampler depth limit");
  cmd->add_option("--feedback-interval", f.feedback_interval,
                  "iterations between syntactic-feedback calls");
  cmd->add_option("--candidate-budget", f.candidate_budget, "max candidates to check");
  cmd->add_option("--gamma", f.gamma, "smoothing exponent");
  cmd->add_flag("--smooth-sampler", f.smooth_sampler,
                "smooth the top-down sampler's pCFG as well");
  cmd->add_option("--weights", f.weights_file, "rule-weight JSON file for the pCFG modes");
  cmd->add_option("--record", f.results_file, "append run records (JSON lines) to this file");
  cmd->add_flag("--verbose", f.verbose, "diagnostic logging");
  cmd->add_flag("--trace", f.trace, "emit per-iteration search trace events");
}

Config build_config(const CommonFlags &f) {
  Config cfg = f.config_path.empty() ? Config{} : load_config_file(f.config_path);
  if (!f.solver_cmd.empty())
    cfg.solver.command = split_command(f.solver_cmd);
  if (!f.backend_kind.empty()) {
    cfg.backend_configured = true;
    if (f.backend_kind == "mock")
      cfg.backend.kind = BackendConfig::Mock;
    else if (f.backend_kind == "remote")
      cfg.backend.kind = BackendConfig::Remote;
    else
      throw Error("unknown backend '" + f.backend_kind + "' (want mock or remote)");
  }
  if (!f.mock_script.empty()) {
    cfg.backend_configured = true;
    cfg.backend.kind = BackendConfig::Mock;
    cfg.backend.script_path = f.mock_script;
  }
  if (!f.endpoint.empty()) {
    cfg.backend_configured = true;
    cfg.backend.kind = BackendConfig::Remote;
    cfg.backend.endpoint = f.endpoint;
  }
  if (!f.model.empty())
    cfg.backend.model = f.model;
  if (!f.transcript.empty())
    cfg.backend.transcript_path = f.transcript;
  if (f.temperature >= 0.0)
    cfg.temperature = f.temperature;
  if (f.seed_set)
    cfg.seed = f.seed;
  if (f.timeout_s >= 0.0)
    cfg.timeout_s = f.timeout_s;
  if (f.solver_timeout_s >= 0.0)
    cfg.solver_timeout_s = f.solver_timeout_s;
  if (f.max_depth > 0)
    cfg.limits.max_depth = f.max_depth;
  if (f.feedback_interval > 0)
    cfg.limits.feedback_interval = static_cast<uint64_t>(f.feedback_interval);
  if (f.candidate_budget > 0)
    cfg.limits.candidate_budget = static_cast<uint64_t>(f.candidate_budget);
  if (f.gamma >= 0.0)
    cfg.limits.gamma = f.gamma;
  if (f.smooth_sampler)
    cfg.limits.sampler_smoothing = true;
  if (!f.weights_file.empty())
    cfg.weights_file = f.weights_file;
  if (!f.results_file.empty())
    cfg.results_file = f.results_file;
  cfg.verbose = f.verbose;
  cfg.trace = f.trace;
  return cfg;
}

int run_solve(const std::string &file, const std::string &mode_str, const CommonFlags &f) {
  auto mode = parse_mode(mode_str);
  if (!mode) {
    std::cerr << "error: unknown mode '" << mode_str << "'; modes are:";
    for (const auto &[name, m] : mode_table())
      std::cerr << " " << name;
    std::cerr << "\n";
    return 1;
  }
  Config cfg = build_config(f);
  RunRecord rec = solve_command(file, *mode, cfg);
  if (!cfg.results_file.empty()) {
    std::ofstream out(cfg.results_file, std::ios::app);
    out << rec.to_line() << "\n";
  }
  if (rec.solved) {
    std::cout << rec.solution << "\n";
    std::cerr << "solved " << rec.benchmark << " in " << rec.elapsed_s << "s ("
              << rec.candidates_enumerated << " candidates, " << rec.verifier_calls
              << " verifier calls, " << rec.llm_calls << " llm calls)\n";
    return 0;
  }
  std::cerr << rec.outcome << ": " << rec.benchmark;
  if (!rec.failure_reason.empty())
    std::cerr << " (" << rec.failure_reason << ")";
  std::cerr << "\n";
  return 2;
}

int run_bench(const std::string &dir, const std::string &modes_csv, int repeats, int jobs,
              const CommonFlags &f) {
  std::vector<Mode> modes;
  std::string item;
  std::istringstream in(modes_csv);
  while (std::getline(in, item, ',')) {
    auto m = parse_mode(item);
    if (!m) {
      std::cerr << "error: unknown mode '" << item << "'\n";
      return 1;
    }
    modes.push_back(*m);
  }
  if (modes.empty()) {
    std::cerr << "error: no modes given\n";
    return 1;
  }
  Config cfg = build_config(f);
  if (repeats > 0)
    cfg.repeats = repeats;
  if (cfg.results_file.empty())
    cfg.results_file = "results.jsonl";
  (void)jobs; // runs are process-isolated; scheduling stays sequential
  bench_command(dir, modes, cfg, std::cout);
  std::cerr << "records written to " << cfg.results_file << "\n";
  return 0;
}

int run_dump_grammar(const std::string &file, const CommonFlags &f, bool smoothed) {
  Config cfg = build_config(f);
  SynthProblem p = parse_problem(detail::read_text_file(file));
  if (p.inv_spec && !p.inv_expanded)
    p = expand_inv_constraints(p);
  WeightedGrammar wg = cfg.weights_file.empty()
                           ? WeightedGrammar::all_ones(p.grammar)
                           : load_weights(p.grammar, cfg.weights_file);
  if (smoothed)
    wg = smooth(wg, cfg.limits.gamma);
  ProbGrammar pg = build_pcfg(wg);
  std::cout << std::left << std::setw(5) << "id" << std::setw(44) << "rule" << std::right
            << std::setw(10) << "weight" << std::setw(10) << "P" << std::setw(10) << "P_t"
            << "\n";
  for (const Rule &r : p.grammar.rules()) {
    std::cout << std::left << std::setw(5) << r.id << std::setw(44)
              << p.grammar.rule_to_string(r) << std::right << std::fixed
              << std::setprecision(4) << std::setw(10) << wg.weights[r.id] << std::setw(10)
              << pg.prob[r.id] << std::setw(10) << pg.prob_terminal[r.id] << "\n";
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"gsynth: LLM-guided enumerative SyGuS solver"};
  app.require_subcommand(1);

  CommonFlags solve_flags, bench_flags, dump_flags;
  std::string solve_file, solve_mode;
  auto *solve = app.add_subcommand("solve", "solve one SyGuS benchmark");
  solve->add_option("file", solve_file, "benchmark (.sl)")->required();
  solve->add_option("--mode", solve_mode, "pipeline mode")->required();
  add_common_flags(solve, solve_flags);

  std::string bench_dir, bench_modes;
  int bench_repeats = 0, bench_jobs = 1;
  auto *bench = app.add_subcommand("bench", "run a directory of benchmarks");
  bench->add_option("dir", bench_dir, "directory of .sl files")->required();
  bench->add_option("--modes", bench_modes, "comma-separated mode list")->required();
  bench->add_option("--repeats", bench_repeats,
                    "repetitions for nondeterministic modes (per-run seeds)");
  bench->add_option("--jobs", bench_jobs, "reserved; runs are process-isolated");
  add_common_flags(bench, bench_flags);

  std::string dump_file;
  bool dump_smoothed = false;
  auto *dump = app.add_subcommand("dump-grammar", "print a benchmark's wCFG/pCFG table");
  dump->add_option("file", dump_file, "benchmark (.sl)")->required();
  dump->add_flag("--smoothed", dump_smoothed, "apply smoothing before normalizing");
  add_common_flags(dump, dump_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed())
      return run_solve(solve_file, solve_mode, solve_flags);
    if (bench->parsed())
      return run_bench(bench_dir, bench_modes, bench_repeats, bench_jobs, bench_flags);
    if (dump->parsed())
      return run_dump_grammar(dump_file, dump_flags, dump_smoothed);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
