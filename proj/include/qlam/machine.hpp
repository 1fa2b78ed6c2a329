#pragma once

#include <optional>
#include <vector>

#include "qlam/state.hpp"
#include "qlam/term.hpp"

namespace qlam {

enum class RuleTag { App1, App2, Beta1, Beta2, BangBeta1, BangBeta2, Gate, Id };

const char* rule_tag_name(RuleTag t);

// The rule fired by one machine step; the target path points at the redex in
// the shared register shape.
struct StepRule {
  RuleTag tag = RuleTag::Id;
  Path target;
};

enum class RunStatus { Halted, Stuck, BudgetExceeded };

const char* run_status_name(RunStatus s);

struct RunResult {
  RunStatus status;
  Superposition state;
  int steps = 0;
  std::vector<StepRule> trace;
};

// Deterministic redex selection on the shared congruent shape: leftmost
// operator-before-operand CBV descent; Id when the register is a value or no
// rule matches.
StepRule select_redex(const TermPtr& shape, Calculus calc);

// One machine step, applied uniformly to all branches; the history track is
// extended with the rule's frame. Gate steps call apply_unitary.
Superposition step(const Superposition& psi, Calculus calc);
Superposition apply_rule(const Superposition& psi, const StepRule& rule,
                         Calculus calc);

// Exact inverse of apply_rule: pops the recorded frame and re-expands it;
// gates are undone with the adjoint matrix.
Superposition step_backward(const Superposition& psi, const StepRule& rule,
                            Calculus calc);

// Iterate step until the first Id fires (Halted on a value register, Stuck
// otherwise) or the budget runs out. LambdaQ mode requires a well-formed
// initial term.
RunResult run(const TermPtr& t, Calculus calc, int max_steps = 10000,
              bool record_trace = false);

}  // namespace qlam
