#pragma once

#include <string>

#include "qlam/machine.hpp"
#include "qlam/state.hpp"
#include "qlam/term.hpp"

namespace qlam {

// Register-only equational reduction: the same redex selection and rewrites
// as the machine, but without the history track. Branches that become equal
// merge by amplitude addition.
using RegisterState = std::map<TermPtr, Amplitude, TermLess>;

RegisterState register_singleton(TermPtr t);

// One reduction step on all branches; a normal form is returned unchanged.
RegisterState reduce_step(const RegisterState& s, Calculus calc);

struct ReduceResult {
  RunStatus status;
  RegisterState state;
  int steps = 0;
};

// Reduce until no rule applies (Halted on a value shape, Stuck otherwise) or
// the budget runs out.
ReduceResult reduce_to_normal(const TermPtr& t, Calculus calc,
                              int max_steps = 10000);
ReduceResult reduce_to_normal(const RegisterState& s, Calculus calc,
                              int max_steps = 10000);

// Reduce a definite, gate-free term to a value. Used for classical
// bookkeeping such as decoding a gate parameter; throws if a gate fires, the
// term gets stuck, or the budget expires.
TermPtr classical_value(const TermPtr& t, Calculus calc,
                        int max_steps = 100000);

// Lockstep comparison of the machine and the register-only reducer: after
// every step the machine state must factor into a shared history and a
// register marginal that matches the reducer state up to a global phase.
struct AgreementReport {
  bool agrees = false;
  int steps = 0;
  std::string detail;  // empty on agreement
};

AgreementReport agrees_with_machine(const TermPtr& t, Calculus calc,
                                    int max_steps = 10000, double tol = 1e-9);

}  // namespace qlam
