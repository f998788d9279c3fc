#pragma once

#include "gsynth/extract.hpp"
#include "gsynth/http_backend.hpp"
#include "gsynth/prompts.hpp"
#include "gsynth/smt_verify.hpp"

namespace gsynth {

struct StandaloneOptions {
  int max_attempts = 6;
  bool llm_convert_fallback = true; // ask the LLM only when local conversion fails
  bool llm_convert_always = false;  // paper-faithful mode: always convert via Prompt 3
};

struct StandaloneResult {
  std::optional<DefinedFunction> solution; // verified Valid
  std::vector<DefinedFunction> collected;  // parsed but wrong attempts
  uint64_t llm_calls = 0;
  uint64_t verifier_calls = 0;
  uint64_t discarded = 0; // unparseable or incomplete responses
};

/// Stand-alone LLM solving: prompt, extract, convert, verify, retry up
/// to max_attempts. Invariant problems get one explanation prompt
/// first. Wrong-but-parseable programs are collected for weighting.
inline StandaloneResult standalone_solve(const SynthProblem &p, Backend &backend,
                                         const SmtSolver &solver,
                                         const StandaloneOptions &opts = {},
                                         Conversation *conversation = nullptr,
                                         const Deadline &deadline = {}) {
  StandaloneResult result;
  Conversation local;
  Conversation &conv = conversation ? *conversation : local;

  if (p.is_invariant()) {
    try {
      query(backend, conv, render_prompt(PromptKind::ExplainInvariant, {.problem = &p}));
      ++result.llm_calls;
    } catch (const Error &) {
      // The warm-up is best-effort; solving proceeds without it.
    }
  }

  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    if (past(deadline))
      break;
    PromptKind kind = attempt == 0 ? PromptKind::InitialSolve : PromptKind::Retry;
    std::string response;
    response = query(backend, conv, render_prompt(kind, {.problem = &p}));
    ++result.llm_calls;

    ExtractedFunction extracted;
    try {
      extracted = extract_program(response);
    } catch (const Error &) {
      ++result.discarded; // bodiless or codeless reply: attempt consumed
      continue;
    }

    DefinedFunction candidate;
    try {
      if (opts.llm_convert_always && !extracted.smtlib)
        throw UnsupportedOperator("conversion delegated to the LLM");
      candidate = lisp_to_smtlib(extracted, p);
    } catch (const Error &) {
      if (!opts.llm_convert_fallback && !opts.llm_convert_always) {
        ++result.discarded;
        continue;
      }
      // Fall back to Prompt 3: ask the LLM itself to convert.
      try {
        std::string lisp_text = response;
        std::string converted = query(
            backend, conv,
            render_prompt(PromptKind::ConvertToSmtlib, {.lisp_code = lisp_text}));
        ++result.llm_calls;
        candidate = lisp_to_smtlib(extract_program(converted), p);
      } catch (const Error &) {
        ++result.discarded;
        continue;
      }
    }

    ++result.verifier_calls;
    Verdict v = solver.verify(candidate, p);
    if (v.valid()) {
      result.solution = std::move(candidate);
      return result;
    }
    // Wrong or undecided answers still teach the grammar weights.
    result.collected.push_back(std::move(candidate));
  }
  return result;
}

} // namespace gsynth
