#include "qlam/reducer.hpp"

#include <cmath>

namespace qlam {

namespace {

Superposition to_super(const RegisterState& s) {
  Superposition psi;
  for (auto& [t, amp] : s) psi[{{}, t}] = amp;
  return psi;
}

RegisterState strip(const Superposition& psi) {
  RegisterState out;
  for (auto& [cfg, amp] : psi) out[cfg.reg] += amp;
  for (auto it = out.begin(); it != out.end();)
    if (std::abs(it->second) <= kPruneThreshold)
      it = out.erase(it);
    else
      ++it;
  return out;
}

}  // namespace

RegisterState register_singleton(TermPtr t) {
  RegisterState s;
  s[std::move(t)] = Amplitude(1.0, 0.0);
  return s;
}

RegisterState reduce_step(const RegisterState& s, Calculus calc) {
  if (s.empty()) throw Error("empty register state");
  StepRule rule = select_redex(s.begin()->first, calc);
  if (rule.tag == RuleTag::Id) return s;
  return strip(apply_rule(to_super(s), rule, calc));
}

ReduceResult reduce_to_normal(const RegisterState& s, Calculus calc,
                              int max_steps) {
  if (max_steps < 1) throw Error("step budget must be at least 1");
  if (s.empty()) throw Error("empty register state");
  ReduceResult r{RunStatus::BudgetExceeded, s, 0};
  for (int i = 0; i < max_steps; ++i) {
    const TermPtr shape = r.state.begin()->first;
    StepRule rule = select_redex(shape, calc);
    if (rule.tag == RuleTag::Id) {
      r.status = is_eval_value(shape, calc) ? RunStatus::Halted
                                            : RunStatus::Stuck;
      return r;
    }
    r.state = strip(apply_rule(to_super(r.state), rule, calc));
    r.steps += 1;
  }
  return r;
}

ReduceResult reduce_to_normal(const TermPtr& t, Calculus calc, int max_steps) {
  return reduce_to_normal(register_singleton(t), calc, max_steps);
}

TermPtr classical_value(const TermPtr& t, Calculus calc, int max_steps) {
  TermPtr cur = t;
  for (int i = 0; i < max_steps; ++i) {
    StepRule rule = select_redex(cur, calc);
    if (rule.tag == RuleTag::Gate)
      throw Error("gate application in a classical context: " + pretty(cur));
    if (rule.tag == RuleTag::Id) {
      if (!is_eval_value(cur, calc))
        throw Error("classical reduction got stuck at: " + pretty(cur));
      return cur;
    }
    Superposition psi = apply_rule(singleton(cur), rule, calc);
    if (psi.size() != 1)
      throw Error("classical reduction branched unexpectedly");
    cur = psi.begin()->first.reg;
  }
  throw Error("classical reduction exceeded its step budget");
}

// ---- machine agreement ---------------------------------------------------

namespace {

// Compare two register distributions up to a global phase.
std::string compare_states(const RegisterState& reduced,
                           const std::map<TermPtr, Amplitude, TermLess>& marg,
                           double tol) {
  Amplitude phase_r(1.0, 0.0), phase_m(1.0, 0.0);
  for (auto& [t, a] : reduced)
    if (std::abs(a) > tol) {
      phase_r = a / std::abs(a);
      break;
    }
  for (auto& [t, a] : marg)
    if (std::abs(a) > tol) {
      phase_m = a / std::abs(a);
      break;
    }
  const Amplitude fix = phase_r / phase_m;
  auto amp_of = [tol](const auto& m, const TermPtr& t) {
    auto it = m.find(t);
    return it == m.end() ? Amplitude(0.0, 0.0) : it->second;
  };
  for (auto& [t, a] : reduced) {
    Amplitude b = amp_of(marg, t) * fix;
    if (std::abs(a - b) > tol)
      return "amplitude mismatch at " + pretty(t) + ": reducer " +
             format_amplitude(a) + " vs machine " + format_amplitude(b);
  }
  for (auto& [t, a] : marg)
    if (std::abs(a) > tol && reduced.find(t) == reduced.end())
      return "machine-only branch " + pretty(t);
  return {};
}

}  // namespace

AgreementReport agrees_with_machine(const TermPtr& t, Calculus calc,
                                    int max_steps, double tol) {
  AgreementReport rep;
  Superposition machine = singleton(t);
  RegisterState reduced = register_singleton(t);
  for (int i = 0; i <= max_steps; ++i) {
    auto factored = factor_history(machine);
    if (!factored) {
      rep.detail = "machine state does not factor after step " +
                   std::to_string(rep.steps);
      return rep;
    }
    std::string diff = compare_states(reduced, factored->register_marginal, tol);
    if (!diff.empty()) {
      rep.detail = "after step " + std::to_string(rep.steps) + ": " + diff;
      return rep;
    }
    StepRule rule = select_redex(machine.begin()->first.reg, calc);
    if (rule.tag == RuleTag::Id) {
      // The id step only stamps the history; the reducer has no counterpart.
      rep.agrees = true;
      return rep;
    }
    machine = apply_rule(machine, rule, calc);
    reduced = strip(apply_rule(to_super(reduced), rule, calc));
    rep.steps += 1;
  }
  rep.detail = "step budget exhausted before a normal form";
  return rep;
}

}  // namespace qlam
