#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qlam/linearity.hpp"
#include "qlam/parser.hpp"
#include "qlam/prelude.hpp"
#include "qlam/reducer.hpp"

using namespace qlam;
using prelude::parse_program;

namespace {

TermPtr normal_of(const std::string& src, Calculus c = Calculus::LambdaQ,
                  int budget = 100000) {
  auto r = reduce_to_normal(prelude::parse_program(src, c), c, budget);
  REQUIRE(r.status == RunStatus::Halted);
  REQUIRE(r.state.size() == 1);
  return r.state.begin()->first;
}

int nat_of(const std::string& src, Calculus c = Calculus::LambdaQ) {
  auto n = prelude::decode_nat(c, normal_of(src, c));
  REQUIRE(n.has_value());
  return *n;
}

// Decode a reduced list value whose elements are numerals.
std::vector<int> nat_list_of(TermPtr v) {
  std::vector<int> out;
  for (;;) {
    REQUIRE((v->kind == TermKind::Lam || v->kind == TermKind::BangLam));
    const TermPtr& body = v->a->a;
    REQUIRE(body->kind == TermKind::App);
    if (body->a->kind == TermKind::Var) break;  // (x ...) = end of list
    REQUIRE(body->a->kind == TermKind::App);    // ((y h) t)
    auto n = prelude::decode_nat(Calculus::LambdaQ, body->a->b);
    REQUIRE(n.has_value());
    out.push_back(*n);
    v = body->b;
  }
  return out;
}

}  // namespace

TEST_CASE("numerals decode back to their integers") {
  for (Calculus c : {Calculus::LambdaQ, Calculus::LambdaI})
    for (int n : {0, 1, 2, 7})
      CHECK(prelude::decode_nat(c, prelude::church_nat(c, n)) == n);
  CHECK_FALSE(prelude::decode_nat(Calculus::LambdaQ, parse("\\x. x")));
  CHECK_FALSE(
      prelude::decode_nat(Calculus::LambdaQ, cnst(ConstId::H)).has_value());
}

TEST_CASE("tuple_of builds the value the surface tuple reduces to") {
  TermPtr built = prelude::tuple_of(
      Calculus::LambdaQ, {cnst(ConstId::Bit0), cnst(ConstId::Bit1)});
  CHECK(term_eq(built, normal_of("(0, 1)")));
  CHECK(oracle::tuple_bits(built) == std::vector<int>{0, 1});
  CHECK(term_eq(prelude::tuple_of(Calculus::LambdaQ, {}),
                prelude::list_empty(Calculus::LambdaQ)));
}

TEST_CASE("arithmetic combinators compute") {
  CHECK(nat_of("((add 0n) 0n)") == 0);
  CHECK(nat_of("((add 2n) 3n)") == 5);
  CHECK(nat_of("((add 3n) 2n)") == 5);
  CHECK(nat_of("(double 0n)") == 0);
  CHECK(nat_of("(double 3n)") == 6);
  CHECK(nat_of("(pred (suc 4n))", Calculus::LambdaI) == 4);
  CHECK(nat_of("((add 2n) 2n)", Calculus::LambdaI) == 4);
  CHECK(nat_of("(double 5n)", Calculus::LambdaI) == 10);
}

TEST_CASE("list combinators compute") {
  CHECK(nat_list_of(normal_of("((map !suc) (1n, 2n))")) ==
        std::vector<int>{2, 3});
  CHECK(nat_list_of(normal_of("((map !double) (4n, 7n, 2n))")) ==
        std::vector<int>{8, 14, 4});
  CHECK(oracle::tuple_bits(normal_of("((append (0, 1)) [1])")) ==
        std::vector<int>{0, 1, 1});
  CHECK(oracle::tuple_bits(normal_of("((append []) [1])")) ==
        std::vector<int>{1});
  CHECK(oracle::tuple_bits(normal_of("(reverse (0, 1, 1))")) ==
        std::vector<int>{1, 1, 0});
  CHECK(nat_list_of(normal_of("((map (\\k. k)) (3n, 1n))",
                              Calculus::LambdaI)) ==
        std::vector<int>{3, 1});
}

TEST_CASE("the fixed point combinator unfolds term-exactly") {
  TermPtr fix = prelude::fix_term();
  TermPtr t = parse("\\!r. !0");
  RegisterState s = register_singleton(app(fix, bang(t)));
  s = reduce_step(s, Calculus::LambdaQ);
  s = reduce_step(s, Calculus::LambdaQ);
  REQUIRE(s.size() == 1);
  // fix !t  -->*  t !(fix !t)
  CHECK(term_eq(s.begin()->first, app(t, bang(app(fix, bang(t))))));
  CHECK(is_well_formed(fix));
}

TEST_CASE("both recursion styles give the same sums") {
  for (int m = 0; m <= 5; ++m) {
    std::string mm = std::to_string(m) + "n";
    TermPtr via_fix = parse_program("((add " + mm + ") 3n)");
    TermPtr via_self = app(app(prelude::add_selfapp(),
                               prelude::church_nat(Calculus::LambdaQ, m)),
                           prelude::church_nat(Calculus::LambdaQ, 3));
    auto a = reduce_to_normal(via_fix, Calculus::LambdaQ, 100000);
    auto b = reduce_to_normal(via_self, Calculus::LambdaQ, 100000);
    REQUIRE(a.status == RunStatus::Halted);
    REQUIRE(b.status == RunStatus::Halted);
    CHECK(prelude::decode_nat(Calculus::LambdaQ, a.state.begin()->first) ==
          m + 3);
    CHECK(term_eq(a.state.begin()->first, b.state.begin()->first));
  }
}

TEST_CASE("uncons splits tuples into continuation arguments") {
  TermPtr pair = prelude::tuple_of(
      Calculus::LambdaQ, {cnst(ConstId::Bit0), cnst(ConstId::Bit1)});
  TermPtr swap = parse("\\a. \\b. (b, a)");
  auto r = reduce_to_normal(app(app(prelude::uncons(2), pair), swap),
                            Calculus::LambdaQ);
  REQUIRE(r.status == RunStatus::Halted);
  CHECK(oracle::tuple_bits(r.state.begin()->first) ==
        std::vector<int>{1, 0});

  // uncons_cons works on any cons cell, leaving the tail a list
  TermPtr triple = prelude::tuple_of(
      Calculus::LambdaQ,
      {cnst(ConstId::Bit1), cnst(ConstId::Bit0), cnst(ConstId::Bit0)});
  TermPtr keep_tail = parse("\\h. \\t. ((\\x. t) h)");
  auto r2 = reduce_to_normal(
      app(app(prelude::uncons_cons(), triple), keep_tail), Calculus::LambdaQ);
  REQUIRE(r2.status == RunStatus::Halted);
  CHECK(oracle::tuple_bits(r2.state.begin()->first) ==
        std::vector<int>{0, 0});
}

TEST_CASE("the classical embedding simulates plain beta reduction") {
  // a couple of hand-picked programs first
  for (const char* src :
       {"((\\x. x) (\\y. y))", "((\\f. (f (\\z. z))) (\\x. (\\y. x)))",
        "(((\\x. (\\y. (y x))) (\\a. a)) (\\b. (b b)))"}) {
    TermPtr t = parse(src, Calculus::LambdaI);
    auto v = oracle::cl_eval(t, 1000);
    REQUIRE(v.has_value());
    TermPtr emb = prelude::embed_classical(t);
    CHECK(is_well_formed(emb));
    auto r = reduce_to_normal(emb, Calculus::LambdaQ, 100000);
    REQUIRE_MESSAGE(r.status == RunStatus::Halted, src);
    CHECK_MESSAGE(
        term_eq(r.state.begin()->first, prelude::embed_classical(*v)), src);
  }
}

TEST_CASE("the embedding agrees with the reference evaluator on random terms") {
  std::mt19937 rng(20260823);
  int checked = 0;
  while (checked < 20) {
    TermPtr t = oracle::random_classical(rng, 5, 0);
    auto v = oracle::cl_eval(t, 400);
    if (!v) continue;  // diverging or budget-bound sample: draw another
    TermPtr emb = prelude::embed_classical(t);
    REQUIRE(is_well_formed(emb));
    auto r = reduce_to_normal(emb, Calculus::LambdaQ, 200000);
    REQUIRE(r.status == RunStatus::Halted);
    CHECK(term_eq(r.state.begin()->first, prelude::embed_classical(*v)));
    ++checked;
  }
}

TEST_CASE("the standard environments expose the algorithm vocabulary") {
  const Env& q = prelude::env(Calculus::LambdaQ);
  for (const char* name : {"id", "add", "map", "append", "reverse", "fix",
                           "epr", "deutsch", "teleport", "fourier"})
    CHECK_MESSAGE(q.count(name) == 1, name);
  const Env& i = prelude::env(Calculus::LambdaI);
  for (const char* name : {"id", "zfix", "pred", "add", "double", "map"})
    CHECK_MESSAGE(i.count(name) == 1, name);
}
