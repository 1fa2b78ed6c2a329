#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qlam/parser.hpp"
#include "qlam/prelude.hpp"
#include "qlam/state.hpp"

using namespace qlam;

namespace {

Superposition two_branch(const char* a, const char* b, Amplitude ca,
                         Amplitude cb) {
  Superposition psi;
  psi[{{}, parse(a)}] = ca;
  psi[{{}, parse(b)}] = cb;
  return psi;
}

}  // namespace

TEST_CASE("gate matrices are the standard unitaries") {
  for (ConstId c : {ConstId::H, ConstId::S, ConstId::R, ConstId::X,
                    ConstId::Y, ConstId::Z, ConstId::Cnot}) {
    const GateSpec& g = gate_spec(c);
    Eigen::MatrixXcd prod = g.u * g.u.adjoint();
    CHECK((prod - Eigen::MatrixXcd::Identity(prod.rows(), prod.cols()))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
  CHECK((gate_spec(ConstId::H).u - oracle::had()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((gate_spec(ConstId::Cnot).u - oracle::cnot()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((gate_spec(ConstId::X).u - oracle::pauli_x()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((gate_spec(ConstId::S).u - oracle::phase_s()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((gate_spec(ConstId::R).u - oracle::phase_r()).cwiseAbs().maxCoeff() <
        1e-12);
  // cphase(1) = controlled-Z; cphase(2) = controlled-S
  CHECK(std::abs(cphase_spec(1).u(3, 3) - oracle::Cx(-1, 0)) < 1e-12);
  CHECK(std::abs(cphase_spec(2).u(3, 3) - oracle::Cx(0, 1)) < 1e-12);
  CHECK_THROWS_AS(cphase_spec(0), Error);
  CHECK_THROWS_AS(gate_spec(ConstId::Bit0), Error);
}

TEST_CASE("norm and prune") {
  auto psi = two_branch("0", "1", {0.6, 0}, {0.8, 0});
  CHECK(norm(psi) == doctest::Approx(1.0));
  psi[{{}, parse("(H 0)")}] = 1e-15;
  prune(psi);
  CHECK(psi.size() == 2);
}

TEST_CASE("apply_unitary on a single bit") {
  Superposition psi = singleton(parse("0"));
  auto out = apply_unitary(psi, {Path{}}, gate_spec(ConstId::H));
  REQUIRE(out.size() == 2);
  for (auto& [cfg, amp] : out)
    CHECK(amp.real() == doctest::Approx(1 / std::sqrt(2.0)));
  // H twice returns to |0> and the |1> branch cancels
  auto back = apply_unitary(out, {Path{}}, gate_spec(ConstId::H));
  REQUIRE(back.size() == 1);
  CHECK(back.begin()->first.reg->cid == ConstId::Bit0);
  CHECK(back.begin()->second.real() == doctest::Approx(1.0));
}

TEST_CASE("apply_unitary acts on the addressed slot only") {
  Superposition psi = singleton(parse("(0 1)"));  // plain application shape
  auto out = apply_unitary(psi, {Path{0}}, gate_spec(ConstId::X));
  REQUIRE(out.size() == 1);
  CHECK(subterm_at(out.begin()->first.reg, {0})->cid == ConstId::Bit1);
  CHECK(subterm_at(out.begin()->first.reg, {1})->cid == ConstId::Bit1);
}

TEST_CASE("apply_unitary groups branches by blanked configuration") {
  // branches differ at the slot: they belong to one group and interfere
  auto psi = two_branch("0", "1", {1 / std::sqrt(2.0), 0},
                        {-1 / std::sqrt(2.0), 0});
  auto out = apply_unitary(psi, {Path{}}, gate_spec(ConstId::H));
  REQUIRE(out.size() == 1);  // H|-> = |1>
  CHECK(out.begin()->first.reg->cid == ConstId::Bit1);
  // branches differing away from the slot stay in separate groups
  auto psi2 = two_branch("(H 0)", "(S 1)", {1, 0}, {1, 0});
  auto out2 = apply_unitary(psi2, {Path{1}}, gate_spec(ConstId::X));
  REQUIRE(out2.size() == 2);
  CHECK(out2.count({{}, parse("(H 1)")}) == 1);
  CHECK(out2.count({{}, parse("(S 0)")}) == 1);
}

TEST_CASE("slot must hold a bit constant") {
  Superposition psi = singleton(parse("(H H)"));
  CHECK_THROWS_AS(apply_unitary(psi, {Path{1}}, gate_spec(ConstId::H)),
                  SlotNotBit);
}

TEST_CASE("gate operands are recognized structurally") {
  CHECK(gate_operand_slots(parse("0"), 1).has_value());
  CHECK_FALSE(gate_operand_slots(parse("(H 0)"), 1).has_value());
  // a reduced two-element tuple value
  TermPtr pair = prelude::tuple_of(
      Calculus::LambdaQ, {cnst(ConstId::Bit1), cnst(ConstId::Bit0)});
  auto slots = gate_operand_slots(pair, 2);
  REQUIRE(slots.has_value());
  REQUIRE(slots->size() == 2);
  CHECK(subterm_at(pair, (*slots)[0])->cid == ConstId::Bit1);
  CHECK(subterm_at(pair, (*slots)[1])->cid == ConstId::Bit0);
  // unreduced tuple syntax is not an operand yet
  CHECK_FALSE(gate_operand_slots(parse("(1, 0)"), 2).has_value());
  // three-element tuples are not two-bit operands
  TermPtr triple = prelude::tuple_of(
      Calculus::LambdaQ,
      {cnst(ConstId::Bit1), cnst(ConstId::Bit0), cnst(ConstId::Bit0)});
  CHECK_FALSE(gate_operand_slots(triple, 2).has_value());
}

TEST_CASE("factor_history splits product states only") {
  TermPtr h = parse("(H 0)");
  Superposition psi;
  psi[{{h}, parse("0")}] = {0.5, 0};
  psi[{{h}, parse("1")}] = {0.5, 0};
  auto f = factor_history(psi);
  REQUIRE(f.has_value());
  CHECK(f->history.size() == 1);
  CHECK(f->register_marginal.size() == 2);

  psi.clear();
  psi[{{parse("0")}, parse("0")}] = {0.5, 0};
  psi[{{parse("1")}, parse("1")}] = {0.5, 0};
  CHECK_FALSE(factor_history(psi).has_value());
}

TEST_CASE("density matrix traces out the history") {
  // entangled history/register: classical mixture
  Superposition psi;
  const double s = 1 / std::sqrt(2.0);
  psi[{{parse("0")}, parse("0")}] = {s, 0};
  psi[{{parse("1")}, parse("1")}] = {s, 0};
  DensityMatrix d = density_matrix(psi);
  REQUIRE(d.rho.rows() == 2);
  CHECK(d.rho(0, 0).real() == doctest::Approx(0.5));
  CHECK(d.rho(1, 1).real() == doctest::Approx(0.5));
  CHECK(std::abs(d.rho(0, 1)) == doctest::Approx(0.0));
  // shared history: coherent superposition, off-diagonals present
  Superposition pure;
  pure[{{parse("(H 0)")}, parse("0")}] = {s, 0};
  pure[{{parse("(H 0)")}, parse("1")}] = {s, 0};
  DensityMatrix p = density_matrix(pure);
  CHECK(p.rho(0, 1).real() == doctest::Approx(0.5));
  // single branch
  DensityMatrix one = density_matrix(singleton(parse("0")));
  REQUIRE(one.rho.rows() == 1);
  CHECK(one.rho(0, 0).real() == doctest::Approx(1.0));
}

TEST_CASE("congruence invariant check reports offenders") {
  auto ok = two_branch("(H 0)", "(H 1)", {0.7, 0}, {0.7, 0});
  CHECK_FALSE(check_congruence(ok).has_value());
  auto bad = two_branch("(H 0)", "(S 0)", {0.7, 0}, {0.7, 0});
  CHECK(check_congruence(bad).has_value());
}

TEST_CASE("printing is canonical and stable") {
  auto psi = two_branch("1", "0", {0.5, 0}, {0.5, -0.5});
  std::string s = print_state(psi);
  // canonical term order puts 0 before 1
  CHECK(s.find("0.500000,-0.500000") < s.find("0.500000,0.000000"));
  CHECK(print_state(psi) == s);
}
