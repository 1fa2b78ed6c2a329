#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qlam/machine.hpp"
#include "qlam/parser.hpp"
#include "qlam/prelude.hpp"

using namespace qlam;

namespace {

// Amplitude attached to a given register term, summed over histories.
Amplitude amp_of(const Superposition& psi, const TermPtr& reg) {
  Amplitude a = 0;
  for (auto& [cfg, amp] : psi)
    if (term_eq(cfg.reg, reg)) a += amp;
  return a;
}

Superposition replay_backward(const RunResult& r, Calculus calc) {
  Superposition psi = r.state;
  for (auto it = r.trace.rbegin(); it != r.trace.rend(); ++it)
    psi = step_backward(psi, *it, calc);
  return psi;
}

}  // namespace

TEST_CASE("redex selection is leftmost, operator before operand") {
  // the operator is already a value: descend into the operand
  StepRule r = select_redex(parse("((\\x. x) ((\\y. y) 0))"),
                            Calculus::LambdaQ);
  CHECK(r.tag == RuleTag::Beta1);
  CHECK(r.target == Path{1});
  // the operator still needs work: it is contracted first
  r = select_redex(parse("(((\\x. x) H) 0)"), Calculus::LambdaQ);
  CHECK(r.tag == RuleTag::Beta1);
  CHECK(r.target == Path{0});
  // values and dead ends both select the identity rule
  CHECK(select_redex(parse("!0"), Calculus::LambdaQ).tag == RuleTag::Id);
  CHECK(select_redex(parse("(0 1)"), Calculus::LambdaQ).tag == RuleTag::Id);
  // a gate redex requires a fully reduced operand
  CHECK(select_redex(parse("(H 0)"), Calculus::LambdaQ).tag == RuleTag::Gate);
  CHECK(select_redex(parse("(H (H 0))"), Calculus::LambdaQ).target ==
        Path{1});
  // beta variants split on whether the binder occurs
  CHECK(select_redex(parse("((\\x. x) 0)"), Calculus::LambdaQ).tag ==
        RuleTag::Beta1);
  CHECK(select_redex(parse("((\\x. 1) 0)"), Calculus::LambdaI).tag ==
        RuleTag::Beta2);
  CHECK(select_redex(parse("((\\!x. (x x)) !H)"), Calculus::LambdaQ).tag ==
        RuleTag::BangBeta1);
  CHECK(select_redex(parse("((\\!x. 1) !H)"), Calculus::LambdaQ).tag ==
        RuleTag::BangBeta2);
}

TEST_CASE("beta1 frames erase the argument but keep the binder spine") {
  Superposition psi = singleton(parse("((\\x. x) 0)"));
  Superposition out = step(psi, Calculus::LambdaQ);
  REQUIRE(out.size() == 1);
  const Configuration& cfg = out.begin()->first;
  CHECK(term_eq(cfg.reg, parse("0")));
  REQUIRE(cfg.history.size() == 1);
  const TermPtr& f = cfg.history[0];
  REQUIRE(f->kind == TermKind::App);
  CHECK(f->a->kind == TermKind::Lam);
  CHECK(f->a->a->kind == TermKind::Var);  // the binder occurrence survives
  CHECK(f->b->kind == TermKind::Placeholder);
}

TEST_CASE("beta2 frames record the discarded argument verbatim") {
  Superposition out =
      step(singleton(parse("((\\x. 1) 0)")), Calculus::LambdaI);
  const Configuration& cfg = out.begin()->first;
  CHECK(term_eq(cfg.reg, parse("1")));
  const TermPtr& f = cfg.history[0];
  CHECK(f->a->kind == TermKind::Lam);
  CHECK(f->a->a->kind == TermKind::Placeholder);
  CHECK(f->b->cid == ConstId::Bit0);  // the argument itself
}

TEST_CASE("nonlinear beta duplicates the suspended argument") {
  Superposition out =
      step(singleton(parse("((\\!x. (x x)) !H)")), Calculus::LambdaQ);
  const Configuration& cfg = out.begin()->first;
  CHECK(term_eq(cfg.reg, parse("(H H)")));
  const TermPtr& f = cfg.history[0];
  CHECK(f->a->kind == TermKind::BangLam);
  CHECK(f->b->kind == TermKind::Placeholder);
}

TEST_CASE("descent into a nested redex builds the context frame in one step") {
  Superposition out =
      step(singleton(parse("(S ((\\x. x) 0))")), Calculus::LambdaQ);
  const Configuration& cfg = out.begin()->first;
  CHECK(term_eq(cfg.reg, parse("(S 0)")));
  // frame: (phi ((\x.x) phi)) - left side of the spine is blanked
  const TermPtr& f = cfg.history[0];
  REQUIRE(f->kind == TermKind::App);
  CHECK(f->a->kind == TermKind::Placeholder);
  CHECK(f->b->kind == TermKind::App);
  CHECK(f->b->a->kind == TermKind::Lam);
}

TEST_CASE("gate steps record the operator and rotate the register") {
  Superposition out = step(singleton(parse("(H 0)")), Calculus::LambdaQ);
  REQUIRE(out.size() == 2);
  const double s = 1 / std::sqrt(2.0);
  CHECK(std::abs(amp_of(out, parse("0")) - s) < 1e-12);
  CHECK(std::abs(amp_of(out, parse("1")) - s) < 1e-12);
  for (auto& [cfg, amp] : out) {
    REQUIRE(cfg.history.size() == 1);
    CHECK(cfg.history[0]->a->cid == ConstId::H);
    CHECK(cfg.history[0]->b->kind == TermKind::Placeholder);
  }
}

TEST_CASE("the id rule closes a run and classifies the outcome") {
  auto halted = run(parse("((\\x. x) !0)"), Calculus::LambdaQ);
  CHECK(halted.status == RunStatus::Halted);
  CHECK(halted.steps == 2);  // beta1, then id
  CHECK(term_eq(halted.state.begin()->first.reg, parse("!0")));
  CHECK(halted.state.begin()->first.history.back()->kind ==
        TermKind::Placeholder);

  auto stuck = run(parse("(0 1)"), Calculus::LambdaQ);
  CHECK(stuck.status == RunStatus::Stuck);
  CHECK(stuck.steps == 1);

  auto looped = run(parse("((\\x. (x x)) (\\x. (x x)))", Calculus::LambdaI),
                    Calculus::LambdaI, 10);
  CHECK(looped.status == RunStatus::BudgetExceeded);
  CHECK(looped.steps == 10);
}

TEST_CASE("ill-formed initial terms are rejected in the linear calculus") {
  CHECK_THROWS_AS(run(parse("\\x. 0"), Calculus::LambdaQ), IllFormedRegister);
  CHECK_THROWS_AS(run(parse("\\x. (x x)"), Calculus::LambdaQ),
                  IllFormedRegister);
  // the same term runs fine classically
  CHECK(run(parse("\\x. 0", Calculus::LambdaI), Calculus::LambdaI).status ==
        RunStatus::Halted);
}

TEST_CASE("cphase decodes its suspended numeral parameter") {
  auto r = run(prelude::parse_program("((cphase !1n) (1, 1))"),
               Calculus::LambdaQ, 1000);
  REQUIRE(r.status == RunStatus::Halted);
  TermPtr expect = prelude::tuple_of(
      Calculus::LambdaQ, {cnst(ConstId::Bit1), cnst(ConstId::Bit1)});
  CHECK(std::abs(amp_of(r.state, expect) - oracle::Cx(-1, 0)) < 1e-12);
  // a non-numeral parameter is an error once the gate fires
  CHECK_THROWS_AS(
      run(prelude::parse_program("((cphase !H) (1, 1))"), Calculus::LambdaQ),
      Error);
}

TEST_CASE("every forward step has an exact inverse") {
  struct Case { const char* src; Calculus calc; };
  for (auto [src, calc] : {Case{"((\\x. ((\\y. y) x)) 0)", Calculus::LambdaQ},
                           Case{"((\\x. 1) (\\y. y))", Calculus::LambdaI},
                           Case{"(H (H 0))", Calculus::LambdaQ},
                           Case{"((\\!x. (x (x 0))) !S)", Calculus::LambdaQ},
                           Case{"(cnot ((H 0), 1))", Calculus::LambdaQ}}) {
    TermPtr t = parse(src, calc);
    RunResult r = run(t, calc, 10000, true);
    REQUIRE(r.status == RunStatus::Halted);
    Superposition back = replay_backward(r, calc);
    REQUIRE_MESSAGE(back.size() == 1, src);
    const auto& [cfg, amp] = *back.begin();
    CHECK(cfg.history.empty());
    CHECK_MESSAGE(term_eq(cfg.reg, t), src);
    CHECK(std::abs(amp - oracle::Cx(1, 0)) < 1e-9);
  }
}

TEST_CASE("backward interleaves with forward at every prefix") {
  TermPtr t = prelude::parse_program("(deutsch cnot)");
  RunResult r = run(t, Calculus::LambdaQ, 10000, true);
  REQUIRE(r.status == RunStatus::Halted);
  // walk forward keeping snapshots, then undo one step at each depth
  Superposition psi = singleton(t);
  for (auto& rule : r.trace) {
    Superposition next = apply_rule(psi, rule, Calculus::LambdaQ);
    Superposition undone = step_backward(next, rule, Calculus::LambdaQ);
    REQUIRE(undone.size() == psi.size());
    for (auto& [cfg, amp] : psi) {
      auto it = undone.find(cfg);
      REQUIRE(it != undone.end());
      CHECK(std::abs(it->second - amp) < 1e-9);
    }
    psi = std::move(next);
  }
}

TEST_CASE("corrupted histories are detected, not misapplied") {
  // no history at all
  CHECK_THROWS_AS(
      step_backward(singleton(parse("0")), {RuleTag::Id, {}},
                    Calculus::LambdaQ),
      MalformedHistory);
  // id expects a placeholder marker
  CHECK_THROWS_AS(
      step_backward(singleton(parse("0"), {cnst(ConstId::H)}),
                    {RuleTag::Id, {}}, Calculus::LambdaQ),
      MalformedHistory);
  // beta1 frame whose operator is not an abstraction
  CHECK_THROWS_AS(
      step_backward(
          singleton(parse("0"), {app(cnst(ConstId::H), placeholder())}),
          {RuleTag::Beta1, {}}, Calculus::LambdaQ),
      MalformedHistory);
  // beta1 frame that never mentions its binder cannot recover the value
  CHECK_THROWS_AS(
      step_backward(
          singleton(parse("0"), {app(lam("x", placeholder()), placeholder())}),
          {RuleTag::Beta1, {}}, Calculus::LambdaQ),
      MalformedHistory);
  // two binder occurrences that disagree about the substituted value
  TermPtr bad_frame =
      app(lam("x", app(var(0, "x"), var(0, "x"))), placeholder());
  CHECK_THROWS_AS(
      step_backward(singleton(parse("(0 1)"), {bad_frame}),
                    {RuleTag::Beta1, {}}, Calculus::LambdaQ),
      MalformedHistory);
}

TEST_CASE("histories grow by exactly one frame per step") {
  RunResult r = run(prelude::parse_program("(teleport 0)"),
                    Calculus::LambdaQ, 10000, true);
  REQUIRE(r.status == RunStatus::Halted);
  for (auto& [cfg, amp] : r.state)
    CHECK(static_cast<int>(cfg.history.size()) == r.steps);
  CHECK(static_cast<int>(r.trace.size()) == r.steps);
}
