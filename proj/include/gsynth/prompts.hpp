#pragma once

#include "gsynth/eval.hpp"
#include "gsynth/printer.hpp"
#include "gsynth/search.hpp"

namespace gsynth {

enum class PromptKind {
  InitialSolve,     // solve in Lisp, full benchmark text up front
  Retry,            // ask for a different guess
  ConvertToSmtlib,  // Lisp -> SMT-LIB conversion request
  ExplainInvariant, // chain-of-thought warm-up for invariant problems
  IntegratedHelper  // helper-function request with the partial program
};

/// What a prompt kind may splice in. Unused fields stay null.
struct PromptContext {
  const SynthProblem *problem = nullptr;
  std::string lisp_code;                      // ConvertToSmtlib
  const SententialForm *partial = nullptr;    // IntegratedHelper
  const DefinedFunction *last_failed = nullptr;
  const Counterexample *cex = nullptr;
};

inline std::string render_prompt(PromptKind kind, const PromptContext &ctx) {
  auto need_problem = [&]() -> const SynthProblem & {
    if (!ctx.problem)
      throw MissingContext("prompt requires the problem");
    return *ctx.problem;
  };

  switch (kind) {
  case PromptKind::InitialSolve: {
    const SynthProblem &p = need_problem();
    std::string out = prompt_problem_text(p);
    out += "\n";
    out += "You are a good synthesizer. Do you know what \"" +
           p.target.signature_header() + "\" is doing?\n";
    out += "Write only one Lisp-like method \"defun " + p.target.name +
           "\" without any built-in methods or arrays.\n";
    out += "Requirements:\n";
    out += "1. No built-in functions.\n";
    out += "2. Never violate the SMT-LIB constraints above.\n";
    out += "3. Pay attention to the define functions.\n";
    out += "4. Ensure the response contains one and only one function.\n";
    out += "5. Do not include any iterations, BitVec, or Int notations in the function "
           "body.\n";
    out += "Write it correctly, or I will lose my job and 100 grandmothers will die. "
           "Don't disappoint me.\n";
    out += "Write only one Lisp-like method \"defun " + p.target.name +
           "\" that never violates the SMT-LIB constraints above.";
    return out;
  }

  case PromptKind::Retry:
    return "You are close to the right answer. Take another guess. You have to try "
           "something different, think harder. Write a different Lisp method that never "
           "violates the SMT-LIB constraints above again.";

  case PromptKind::ConvertToSmtlib: {
    if (ctx.lisp_code.empty())
      throw MissingContext("conversion prompt requires the Lisp code");
    std::string out =
        "You are a good programming language converter. Convert the Lisp function to "
        "SMT-LIB:\n";
    out += ctx.lisp_code + "\n";
    out += "Based on the Lisp code provided above, convert the 'defun' Lisp-like code to "
           "a corresponding SMT-LIB function. Use SMT-LIB syntax starting with "
           "(define-fun\n";
    out += "Follow these guidelines:\n";
    out += "1. Only give me the function definition starting with '(define-fun'.\n";
    out += "2. Pay attention to types. If there are bit-vector terms, they need to be of "
           "the same width.\n";
    out += "3. Ensure the SMT-LIB function contains one and only one function definition "
           "starting with '(define-fun'.\n";
    out += "4. Do not include any iterations, BitVec, or Int notations in the function "
           "body.\n";
    out += "5. Use the assigned values from the Lisp code during translation.\n";
    out += "6. Do not introduce any variables that do not exist in the Lisp function.\n";
    out += "Rules for SMT-LIB: +, -, *, ite, >, =, <, >=, <=, and, or, not, true, false.";
    return out;
  }

  case PromptKind::ExplainInvariant: {
    const SynthProblem &p = need_problem();
    std::string out = "You are a good formal methods expert. Here is a loop invariant "
                      "synthesis problem:\n";
    out += prompt_problem_text(p);
    out += "\nExplain step by step what the constraints above require of the invariant "
           "\"" +
           p.target.name + "\". Do not write any code yet.";
    return out;
  }

  case PromptKind::IntegratedHelper: {
    const SynthProblem &p = need_problem();
    if (!ctx.partial)
      throw MissingContext("integrated prompt requires the partial program");
    std::string out = "You are teaching a student to write SMT-LIB. The student must "
                      "write a function that satisfies the following constraints:\n";
    out += constraints_text(p) + "\n";
    out += "So far, the student has written this code:\n";
    out += p.target.signature_header() + "\n    " +
           ctx.partial->form->print(Dialect::Smtlib, true) + ")\n";
    out += "Can you suggest some helper functions for the student to use to complete "
           "this code and replace the ??\n";
    if (ctx.last_failed && ctx.last_failed->body) {
      out += "The student previously tried this incorrect solution:\n";
      out += ctx.last_failed->print() + "\n";
      if (ctx.cex)
        out += "It fails on the input " + ctx.cex->to_string() + ".\n";
    }
    out += "You must print only the code and nothing else.";
    return out;
  }
  }
  throw Error("unknown prompt kind");
}

} // namespace gsynth
