#pragma once

#include "qlam/term.hpp"

namespace qlam::algorithms {

// Closed program terms in the linear calculus, ready for the machine.

TermPtr epr();            // cnot ((H 0), 0): maximally entangled pair
TermPtr deutsch_term();   // expects a two-bit oracle term
TermPtr teleport_term();  // expects a one-qubit input
TermPtr fourier_term();   // expects a bit list, any length

TermPtr deutsch(const TermPtr& oracle);
TermPtr teleport(const TermPtr& qubit);
TermPtr fourier(const TermPtr& list);

// Oracles |x,y> -> |x, y + f(x)> for the four one-bit functions.
TermPtr oracle_constant0();  // f(x) = 0
TermPtr oracle_constant1();  // f(x) = 1
TermPtr oracle_identity();   // f(x) = x   (balanced)
TermPtr oracle_negation();   // f(x) = 1-x (balanced)

}  // namespace qlam::algorithms
