#include "qlam/algorithms.hpp"

#include "qlam/prelude.hpp"

namespace qlam::algorithms {

namespace {

TermPtr named(const std::string& name) {
  return prelude::env(Calculus::LambdaQ).at(name);
}

}  // namespace

TermPtr epr() { return named("epr"); }
TermPtr deutsch_term() { return named("deutsch"); }
TermPtr teleport_term() { return named("teleport"); }
TermPtr fourier_term() { return named("fourier"); }

TermPtr deutsch(const TermPtr& oracle) { return app(deutsch_term(), oracle); }
TermPtr teleport(const TermPtr& qubit) { return app(teleport_term(), qubit); }
TermPtr fourier(const TermPtr& list) { return app(fourier_term(), list); }

TermPtr oracle_constant0() {
  static const TermPtr t = prelude::parse_program("\\p. p");
  return t;
}

TermPtr oracle_constant1() {
  static const TermPtr t =
      prelude::parse_program("\\p. let (x, y) = p in (x, (X y))");
  return t;
}

TermPtr oracle_identity() {
  static const TermPtr t = prelude::parse_program("\\p. (cnot p)");
  return t;
}

TermPtr oracle_negation() {
  static const TermPtr t =
      prelude::parse_program("\\p. let (x, y) = (cnot p) in (x, (X y))");
  return t;
}

}  // namespace qlam::algorithms
