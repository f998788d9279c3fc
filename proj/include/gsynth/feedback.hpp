#pragma once

#include "gsynth/augment.hpp"
#include "gsynth/standalone.hpp"

namespace gsynth {

struct FeedbackState {
  std::optional<DefinedFunction> last_failed;
  std::optional<Counterexample> last_cex;
  uint64_t llm_calls = 0;
  uint64_t helpers_accepted = 0;
  uint64_t helpers_discarded = 0;
};

/// The syntactic feedback generator: prompt with the partial program
/// (plus the most recent failed candidate and counterexample, when
/// known), extract helper functions, inline them as new productions,
/// and bump existing weights by their derivation counts. Backend
/// failures degrade to an unchanged grammar; the enumerator never dies
/// because the oracle is down.
inline WeightedGrammar syntactic_feedback(const WeightedGrammar &wg,
                                          const SententialForm &partial,
                                          const std::vector<Counterexample> &cexs,
                                          const SynthProblem &p, Backend &backend,
                                          FeedbackState &state,
                                          std::ostream *warn = nullptr) {
  PromptContext ctx;
  ctx.problem = &p;
  ctx.partial = &partial;
  if (state.last_failed)
    ctx.last_failed = &*state.last_failed;
  if (state.last_cex)
    ctx.cex = &*state.last_cex;
  (void)cexs; // only the most recent counterexample goes into the prompt

  std::string response;
  try {
    Conversation conv; // integrated prompts are one-shot, no history
    response = query(backend, conv, render_prompt(PromptKind::IntegratedHelper, ctx));
    ++state.llm_calls;
  } catch (const Error &e) {
    if (warn)
      (*warn) << "warning: syntactic feedback skipped: " << e.what() << "\n";
    return wg;
  }

  std::vector<DefinedFunction> helpers;
  std::vector<TermPtr> patterns;
  for (const ExtractedFunction &raw : extract_all_programs(response)) {
    try {
      DefinedFunction helper = helper_to_function(raw, p);
      patterns.push_back(inline_helper_pattern(wg.grammar, helper));
      helpers.push_back(std::move(helper));
      ++state.helpers_accepted;
    } catch (const Error &e) {
      ++state.helpers_discarded;
      if (warn)
        (*warn) << "warning: helper discarded: " << e.what() << "\n";
    }
  }
  // Weight counts run against the pre-augmentation grammar (a new rule
  // must not count itself), then each helper lands as a production.
  WeightedGrammar out = apply_weight_counts(wg, patterns);
  for (const DefinedFunction &helper : helpers) {
    try {
      out = augment(out, helper);
    } catch (const DiscardedHelper &e) {
      ++state.helpers_discarded;
      if (warn)
        (*warn) << "warning: helper discarded: " << e.what() << "\n";
    }
  }
  return out;
}

} // namespace gsynth
