#pragma once

#include <json.hpp>

#include "gsynth/cegis.hpp"

namespace gsynth {

/// One solving run, as written to the line-delimited results file.
struct RunRecord {
  std::string benchmark;
  std::string mode;
  std::string outcome; // solved | timeout | failed
  bool solved = false;
  double elapsed_s = 0.0;
  uint64_t candidates_enumerated = 0;
  uint64_t verifier_calls = 0;
  uint64_t llm_calls = 0;
  std::string solution; // SMT-LIB define-fun, original names
  uint64_t seed = 0;
  std::string failure_reason;
  double llm_seconds = 0.0;
  double search_seconds = 0.0;
  double verify_seconds = 0.0;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["benchmark"] = benchmark;
    j["mode"] = mode;
    j["outcome"] = outcome;
    j["solved"] = solved;
    j["elapsed_s"] = elapsed_s;
    j["candidates_enumerated"] = candidates_enumerated;
    j["verifier_calls"] = verifier_calls;
    j["llm_calls"] = llm_calls;
    j["solution"] = solution;
    j["seed"] = seed;
    j["failure_reason"] = failure_reason;
    j["phases"] = {{"llm_s", llm_seconds},
                   {"search_s", search_seconds},
                   {"verify_s", verify_seconds}};
    return j;
  }

  std::string to_line() const { return to_json().dump(); }

  /// The timing fields vary run to run; everything else is the
  /// deterministic payload.
  nlohmann::json deterministic_json() const {
    nlohmann::json j = to_json();
    j.erase("elapsed_s");
    j.erase("phases");
    return j;
  }

  static RunRecord from_json(const nlohmann::json &j) {
    RunRecord r;
    r.benchmark = j.value("benchmark", "");
    r.mode = j.value("mode", "");
    r.outcome = j.value("outcome", "");
    r.solved = j.value("solved", false);
    r.elapsed_s = j.value("elapsed_s", 0.0);
    r.candidates_enumerated = j.value("candidates_enumerated", uint64_t{0});
    r.verifier_calls = j.value("verifier_calls", uint64_t{0});
    r.llm_calls = j.value("llm_calls", uint64_t{0});
    r.solution = j.value("solution", "");
    r.seed = j.value("seed", uint64_t{0});
    r.failure_reason = j.value("failure_reason", "");
    if (j.contains("phases")) {
      r.llm_seconds = j["phases"].value("llm_s", 0.0);
      r.search_seconds = j["phases"].value("search_s", 0.0);
      r.verify_seconds = j["phases"].value("verify_s", 0.0);
    }
    return r;
  }
};

} // namespace gsynth
