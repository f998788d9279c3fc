#pragma once

#include <fstream>

#include <json.hpp>

#include "gsynth/chat.hpp"
#include "gsynth/search.hpp"
#include "gsynth/smt_verify.hpp"

namespace gsynth {

/// Everything a run needs in one place; file values first, then flag
/// overrides. Every search hyperparameter is pinned here.
struct Config {
  SolverConfig solver;
  BackendConfig backend;
  bool backend_configured = false;
  std::optional<double> temperature; // unset: per-mode default
  SearchLimits limits;
  double timeout_s = 600.0;
  double solver_timeout_s = 30.0;
  uint64_t seed = 0;
  int repeats = 1;
  std::string weights_file;
  std::string results_file;
  bool verbose = false;
  bool trace = false;
};

inline Config load_config_json(const nlohmann::json &j) {
  Config cfg;
  if (j.contains("solver")) {
    const auto &s = j["solver"];
    if (s.contains("command"))
      cfg.solver.command = s["command"].get<std::vector<std::string>>();
    if (s.contains("query_timeout_s"))
      cfg.solver_timeout_s = s["query_timeout_s"].get<double>();
  }
  if (j.contains("backend")) {
    const auto &b = j["backend"];
    cfg.backend_configured = true;
    if (b.contains("kind")) {
      std::string kind = b["kind"].get<std::string>();
      if (kind == "mock")
        cfg.backend.kind = BackendConfig::Mock;
      else if (kind == "remote")
        cfg.backend.kind = BackendConfig::Remote;
      else
        throw Error("unknown backend kind '" + kind + "'");
    }
    if (b.contains("model"))
      cfg.backend.model = b["model"].get<std::string>();
    if (b.contains("temperature"))
      cfg.temperature = b["temperature"].get<double>();
    if (b.contains("script"))
      cfg.backend.script_path = b["script"].get<std::string>();
    if (b.contains("endpoint"))
      cfg.backend.endpoint = b["endpoint"].get<std::string>();
    if (b.contains("token_env"))
      cfg.backend.token_env = b["token_env"].get<std::string>();
    if (b.contains("request_timeout_s"))
      cfg.backend.request_timeout_s = b["request_timeout_s"].get<double>();
    if (b.contains("max_retries"))
      cfg.backend.max_retries = b["max_retries"].get<int>();
    if (b.contains("transcript"))
      cfg.backend.transcript_path = b["transcript"].get<std::string>();
  }
  if (j.contains("search")) {
    const auto &s = j["search"];
    if (s.contains("max_depth"))
      cfg.limits.max_depth = s["max_depth"].get<int>();
    if (s.contains("feedback_interval"))
      cfg.limits.feedback_interval = s["feedback_interval"].get<uint64_t>();
    if (s.contains("gamma"))
      cfg.limits.gamma = s["gamma"].get<double>();
    if (s.contains("smooth_sampler"))
      cfg.limits.sampler_smoothing = s["smooth_sampler"].get<bool>();
    if (s.contains("candidate_budget") && !s["candidate_budget"].is_null())
      cfg.limits.candidate_budget = s["candidate_budget"].get<uint64_t>();
  }
  if (j.contains("timeout_s"))
    cfg.timeout_s = j["timeout_s"].get<double>();
  if (j.contains("seed"))
    cfg.seed = j["seed"].get<uint64_t>();
  if (j.contains("repeats"))
    cfg.repeats = j["repeats"].get<int>();
  if (j.contains("weights_file"))
    cfg.weights_file = j["weights_file"].get<std::string>();
  if (j.contains("results_file"))
    cfg.results_file = j["results_file"].get<std::string>();
  return cfg;
}

inline Config load_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open config file " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded())
    throw Error("config file " + path + " is not valid JSON");
  return load_config_json(j);
}

/// Weight files key rules by their printed form, which is stable across
/// runs as long as the grammar is.
inline void save_weights(const WeightedGrammar &wg, const std::string &path) {
  nlohmann::json j;
  for (const Rule &r : wg.grammar.rules())
    j[wg.grammar.rule_to_string(r)] = wg.weights[r.id];
  std::ofstream out(path);
  if (!out)
    throw Error("cannot write weights file " + path);
  out << j.dump(2) << "\n";
}

inline WeightedGrammar load_weights(const Grammar &g, const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open weights file " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded())
    throw Error("weights file " + path + " is not valid JSON");
  WeightedGrammar wg = WeightedGrammar::zeros(g);
  for (const Rule &r : g.rules()) {
    std::string key = g.rule_to_string(r);
    if (j.contains(key))
      wg.weights[r.id] = j[key].get<double>();
  }
  return wg;
}

} // namespace gsynth
