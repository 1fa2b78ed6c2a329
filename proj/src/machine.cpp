#include "qlam/machine.hpp"

#include "qlam/linearity.hpp"
#include "qlam/prelude.hpp"
#include "qlam/reducer.hpp"

namespace qlam {

const char* rule_tag_name(RuleTag t) {
  switch (t) {
    case RuleTag::App1: return "app1";
    case RuleTag::App2: return "app2";
    case RuleTag::Beta1: return "beta1";
    case RuleTag::Beta2: return "beta2";
    case RuleTag::BangBeta1: return "!beta1";
    case RuleTag::BangBeta2: return "!beta2";
    case RuleTag::Gate: return "gate";
    case RuleTag::Id: return "id";
  }
  return "?";
}

const char* run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Halted: return "halted";
    case RunStatus::Stuck: return "stuck";
    case RunStatus::BudgetExceeded: return "budget-exceeded";
  }
  return "?";
}

// ---- redex selection ---------------------------------------------------

namespace {

// Arity of a complete gate operator; bare cphase still waits for its !n
// parameter and is not an operator yet.
int operator_arity(const TermPtr& op) {
  if (op->kind == TermKind::Const) return const_bit_arity(op->cid);
  return 2;  // (cphase !n)
}

std::optional<StepRule> sel(const TermPtr& t, Calculus calc, Path& p) {
  if (t->kind != TermKind::App) return std::nullopt;
  const TermPtr& f = t->a;
  const TermPtr& a = t->b;
  if (!is_eval_value(f, calc)) {
    p.push_back(0);
    auto r = sel(f, calc, p);
    if (!r) p.pop_back();
    return r;
  }
  if (!is_eval_value(a, calc)) {
    p.push_back(1);
    auto r = sel(a, calc, p);
    if (!r) p.pop_back();
    return r;
  }
  if (f->kind == TermKind::Lam)
    return StepRule{contains_var(f->a, 0) ? RuleTag::Beta1 : RuleTag::Beta2, p};
  if (calc == Calculus::LambdaQ && f->kind == TermKind::BangLam &&
      a->kind == TermKind::Bang)
    return StepRule{
        contains_var(f->a, 0) ? RuleTag::BangBeta1 : RuleTag::BangBeta2, p};
  if (is_gate_operator(f) && gate_operand_slots(a, operator_arity(f)))
    return StepRule{RuleTag::Gate, p};
  return std::nullopt;
}

}  // namespace

StepRule select_redex(const TermPtr& shape, Calculus calc) {
  Path p;
  if (auto r = sel(shape, calc, p)) return *r;
  return StepRule{RuleTag::Id, {}};
}

// ---- forward step ------------------------------------------------------

namespace {

GateSpec gate_spec_of(const TermPtr& op, Calculus calc) {
  if (op->kind == TermKind::Const) return gate_spec(op->cid);
  if (op->kind != TermKind::App || op->a->kind != TermKind::Const ||
      op->a->cid != ConstId::CPhase || op->b->kind != TermKind::Bang)
    throw Error("not a gate operator: " + pretty(op));
  // The parameter sits inside a suspension; evaluate it classically.
  TermPtr v = classical_value(op->b->a, calc);
  auto n = prelude::decode_nat(calc, v);
  if (!n) throw Error("cphase parameter does not evaluate to a numeral");
  return cphase_spec(*n);
}

struct BranchStep {
  TermPtr frame;
  TermPtr reg;
};

// Walk to the redex, building the history frame (the context spine with
// placeholders at the untouched sides) and the rewritten register together.
BranchStep rewrite(const TermPtr& t, const Path& p, size_t i, RuleTag tag) {
  if (i < p.size()) {
    if (t->kind != TermKind::App)
      throw Error("redex path does not match register shape");
    int dir = p[i];
    BranchStep sub = rewrite(dir == 0 ? t->a : t->b, p, i + 1, tag);
    if (dir == 0)
      return {app(sub.frame, placeholder()), app(sub.reg, t->b)};
    return {app(placeholder(), sub.frame), app(t->a, sub.reg)};
  }
  if (t->kind != TermKind::App)
    throw Error("redex path does not reach an application");
  switch (tag) {
    case RuleTag::Beta1:
      // ((\x.E) v): record (\x.E-bar) phi, contract to E[v/x].
      return {app(lam(t->a->hint, erase_keep(t->a->a)), placeholder()),
              substitute(t->a->a, t->b)};
    case RuleTag::Beta2:
      // x unused: the discarded argument is recorded verbatim.
      return {app(lam(t->a->hint, placeholder()), t->b),
              substitute(t->a->a, placeholder())};
    case RuleTag::BangBeta1:
      return {app(bang_lam(t->a->hint, erase_keep(t->a->a)), placeholder()),
              substitute(t->a->a, t->b->a)};
    case RuleTag::BangBeta2:
      return {app(bang_lam(t->a->hint, placeholder()), t->b),
              substitute(t->a->a, placeholder())};
    case RuleTag::Gate:
      // Record (c_U phi); the operand stays in the register for the unitary.
      return {app(t->a, placeholder()), t->b};
    default:
      throw Error("rule has no redex contraction");
  }
}

}  // namespace

Superposition apply_rule(const Superposition& psi, const StepRule& rule,
                         Calculus calc) {
  if (psi.empty()) throw Error("empty superposition");
  if (rule.tag == RuleTag::Id) {
    Superposition out;
    for (auto& [cfg, amp] : psi) {
      auto h = cfg.history;
      h.push_back(placeholder());
      out[{std::move(h), cfg.reg}] += amp;
    }
    return out;
  }

  if (rule.tag == RuleTag::Gate) {
    const TermPtr& shape = psi.begin()->first.reg;
    Path op_path = rule.target;
    op_path.push_back(0);
    TermPtr op = subterm_at(shape, op_path);
    GateSpec spec = gate_spec_of(op, calc);

    Path arg_path = rule.target;
    arg_path.push_back(1);
    auto rel = gate_operand_slots(subterm_at(shape, arg_path), spec.arity);
    if (!rel) throw Error("gate operand is not in bit form");

    Superposition mid;
    for (auto& [cfg, amp] : psi) {
      BranchStep s = rewrite(cfg.reg, rule.target, 0, RuleTag::Gate);
      auto h = cfg.history;
      h.push_back(s.frame);
      mid[{std::move(h), s.reg}] += amp;
    }
    std::vector<BitSlot> slots;
    for (auto& r : *rel) {
      Path s = rule.target;
      s.insert(s.end(), r.begin(), r.end());
      slots.push_back(std::move(s));
    }
    return apply_unitary(mid, slots, spec);
  }

  Superposition out;
  for (auto& [cfg, amp] : psi) {
    BranchStep s = rewrite(cfg.reg, rule.target, 0, rule.tag);
    auto h = cfg.history;
    h.push_back(s.frame);
    out[{std::move(h), s.reg}] += amp;
  }
  return out;
}

Superposition step(const Superposition& psi, Calculus calc) {
  if (psi.empty()) throw Error("empty superposition");
  if (auto err = check_congruence(psi)) throw IllFormedRegister(*err);
  StepRule rule = select_redex(psi.begin()->first.reg, calc);
  return apply_rule(psi, rule, calc);
}

// ---- backward step -----------------------------------------------------

namespace {

// Rebuild the original abstraction body and the substituted value from the
// bar-erased frame body and the contracted register term. `d` counts binders
// crossed below the original binder.
TermPtr reconstruct(const TermPtr& ebar, const TermPtr& cur, int d, TermPtr& v) {
  switch (ebar->kind) {
    case TermKind::Placeholder:
      // A binder-free subterm: indices above d were decremented at
      // contraction time.
      return shift(cur, 1, d);
    case TermKind::Var: {
      if (ebar->index != d)
        throw MalformedHistory("unexpected variable in erased frame");
      TermPtr cand = shift(cur, -d, 0);
      if (v && !term_eq(v, cand))
        throw MalformedHistory("inconsistent values at binder occurrences");
      v = cand;
      return var(d, ebar->hint);
    }
    case TermKind::ErasedLam:
      if (cur->kind == TermKind::Lam)
        return lam(cur->hint, reconstruct(ebar->a, cur->a, d + 1, v));
      if (cur->kind == TermKind::BangLam)
        return bang_lam(cur->hint, reconstruct(ebar->a, cur->a, d + 1, v));
      if (cur->kind == TermKind::ErasedLam)
        return erased_lam(reconstruct(ebar->a, cur->a, d + 1, v));
      throw MalformedHistory("frame abstraction does not match register");
    case TermKind::Bang:
      if (cur->kind != TermKind::Bang)
        throw MalformedHistory("frame suspension does not match register");
      return bang(reconstruct(ebar->a, cur->a, d, v));
    case TermKind::App:
      if (cur->kind != TermKind::App)
        throw MalformedHistory("frame application does not match register");
      return app(reconstruct(ebar->a, cur->a, d, v),
                 reconstruct(ebar->b, cur->b, d, v));
    default:
      throw MalformedHistory("unexpected node in erased frame");
  }
}

TermPtr unwind(const TermPtr& reg, const TermPtr& frame, const Path& p,
               size_t i, RuleTag tag) {
  if (i < p.size()) {
    if (frame->kind != TermKind::App || reg->kind != TermKind::App)
      throw MalformedHistory("frame spine does not match register");
    if (p[i] == 0) {
      if (frame->b->kind != TermKind::Placeholder)
        throw MalformedHistory("frame spine is not a left context");
      return app(unwind(reg->a, frame->a, p, i + 1, tag), reg->b);
    }
    if (frame->a->kind != TermKind::Placeholder)
      throw MalformedHistory("frame spine is not a right context");
    return app(reg->a, unwind(reg->b, frame->b, p, i + 1, tag));
  }
  if (frame->kind != TermKind::App)
    throw MalformedHistory("frame does not record a redex");
  switch (tag) {
    case RuleTag::Beta1: {
      if (frame->a->kind != TermKind::Lam ||
          frame->b->kind != TermKind::Placeholder)
        throw MalformedHistory("frame does not record a beta1 step");
      TermPtr v;
      TermPtr body = reconstruct(frame->a->a, reg, 0, v);
      if (!v) throw MalformedHistory("beta1 frame never mentions the binder");
      return app(lam(frame->a->hint, body), v);
    }
    case RuleTag::BangBeta1: {
      if (frame->a->kind != TermKind::BangLam ||
          frame->b->kind != TermKind::Placeholder)
        throw MalformedHistory("frame does not record a !beta1 step");
      TermPtr v;
      TermPtr body = reconstruct(frame->a->a, reg, 0, v);
      if (!v) throw MalformedHistory("!beta1 frame never mentions the binder");
      return app(bang_lam(frame->a->hint, body), bang(v));
    }
    case RuleTag::Beta2:
      if (frame->a->kind != TermKind::Lam ||
          frame->a->a->kind != TermKind::Placeholder)
        throw MalformedHistory("frame does not record a beta2 step");
      return app(lam(frame->a->hint, shift(reg, 1)), frame->b);
    case RuleTag::BangBeta2:
      if (frame->a->kind != TermKind::BangLam ||
          frame->a->a->kind != TermKind::Placeholder ||
          frame->b->kind != TermKind::Bang)
        throw MalformedHistory("frame does not record a !beta2 step");
      return app(bang_lam(frame->a->hint, shift(reg, 1)), frame->b);
    default:
      throw MalformedHistory("rule has no frame");
  }
}

}  // namespace

Superposition step_backward(const Superposition& psi, const StepRule& rule,
                            Calculus calc) {
  if (psi.empty()) throw Error("empty superposition");
  for (auto& [cfg, amp] : psi)
    if (cfg.history.empty())
      throw MalformedHistory("history track is empty");

  if (rule.tag == RuleTag::Id) {
    Superposition out;
    for (auto& [cfg, amp] : psi) {
      if (cfg.history.back()->kind != TermKind::Placeholder)
        throw MalformedHistory("last frame is not an id marker");
      auto h = cfg.history;
      h.pop_back();
      out[{std::move(h), cfg.reg}] += amp;
    }
    return out;
  }

  if (rule.tag == RuleTag::Gate) {
    const Configuration& first = psi.begin()->first;
    // Frames are branch-independent for gate steps; read the operator off
    // the first branch.
    TermPtr bottom = first.history.back();
    for (int dir : rule.target) {
      if (bottom->kind != TermKind::App)
        throw MalformedHistory("gate frame spine does not match path");
      bottom = dir == 0 ? bottom->a : bottom->b;
    }
    if (bottom->kind != TermKind::App ||
        bottom->b->kind != TermKind::Placeholder ||
        !is_gate_operator(bottom->a))
      throw MalformedHistory("frame does not record a gate step");
    TermPtr op = bottom->a;
    GateSpec spec = gate_spec_of(op, calc);
    auto rel = gate_operand_slots(subterm_at(first.reg, rule.target),
                                  spec.arity);
    if (!rel) throw MalformedHistory("register is not in post-gate form");
    std::vector<BitSlot> slots;
    for (auto& r : *rel) {
      Path s = rule.target;
      s.insert(s.end(), r.begin(), r.end());
      slots.push_back(std::move(s));
    }
    GateSpec adjoint{spec.id, spec.arity,
                     Eigen::MatrixXcd(spec.u.adjoint())};
    Superposition undone = apply_unitary(psi, slots, adjoint);

    Superposition out;
    for (auto& [cfg, amp] : undone) {
      auto h = cfg.history;
      h.pop_back();
      TermPtr operand = subterm_at(cfg.reg, rule.target);
      out[{std::move(h), replace_at(cfg.reg, rule.target, app(op, operand))}] +=
          amp;
    }
    return out;
  }

  Superposition out;
  for (auto& [cfg, amp] : psi) {
    TermPtr frame = cfg.history.back();
    auto h = cfg.history;
    h.pop_back();
    out[{std::move(h), unwind(cfg.reg, frame, rule.target, 0, rule.tag)}] +=
        amp;
  }
  return out;
}

// ---- driver ------------------------------------------------------------

RunResult run(const TermPtr& t, Calculus calc, int max_steps,
              bool record_trace) {
  if (max_steps < 1) throw Error("step budget must be at least 1");
  if (calc == Calculus::LambdaQ) {
    auto violations = check_well_formed(t);
    if (!violations.empty())
      throw IllFormedRegister("initial term is not well formed: " +
                              std::string(violation_kind_name(
                                  violations.front().kind)) +
                              " (" + violations.front().binder + ")");
  }
  RunResult r;
  r.state = singleton(t);
  for (int i = 0; i < max_steps; ++i) {
    const TermPtr shape = r.state.begin()->first.reg;
    StepRule rule = select_redex(shape, calc);
    r.state = apply_rule(r.state, rule, calc);
    r.steps += 1;
    if (record_trace) r.trace.push_back(rule);
    if (rule.tag == RuleTag::Id) {
      r.status = is_eval_value(shape, calc) ? RunStatus::Halted
                                            : RunStatus::Stuck;
      return r;
    }
  }
  r.status = RunStatus::BudgetExceeded;
  return r;
}

}  // namespace qlam
