#pragma once

#include <optional>
#include <string>

#include "qlam/parser.hpp"
#include "qlam/term.hpp"

namespace qlam::prelude {

// The plain classical encodings serve LambdaI; the bang-adapted forms serve
// LambdaQ. All builders return closed terms.

TermPtr id_term();

TermPtr church_zero(Calculus c);
TermPtr church_suc(Calculus c);
TermPtr church_nat(Calculus c, int n);
TermPtr church_pred(Calculus c);
std::optional<int> decode_nat(Calculus c, const TermPtr& value);

TermPtr list_empty(Calculus c);
TermPtr list_cons(Calculus c);
// (x1,...,xn) as a cons chain of already-built terms.
TermPtr tuple_of(Calculus c, const std::vector<TermPtr>& elems);
// Two-element-tuple *value* recognizer is in state.hpp (bit slots).

// Continuation-style tuple splitters used by the LambdaQ "let" desugaring:
// (uncons n) l k  -->*  k x1 ... xn   for an n-element tuple value l.
TermPtr uncons(int n);
// (uncons_cons) l k  -->*  k h t      for any cons value l.
TermPtr uncons_cons();

// Turing-style fixed point combinator for the linear calculus;
// fix !t --> t !(fix !t).
TermPtr fix_term();

TermPtr add_term(Calculus c);   // LambdaQ: fix-based; LambdaI: Y-combinator style
TermPtr add_selfapp();          // LambdaQ self-application (t !t) adaptation
TermPtr double_term(Calculus c);
TermPtr map_term(Calculus c);
TermPtr append_term();          // corrected, well-formed
TermPtr naive_append_term();    // textbook-naive, deliberately ill-formed
TermPtr reverse_term();

// Classical-to-linear embedding:
//   (t1 t2)* = ((\!z.z) t1*) t2*,  x* = !x,  (\x.t)* = !(\!x.t*)
TermPtr embed_classical(const TermPtr& classical);

// Named environment handed to the parser: prelude combinators plus the
// algorithm terms (deutsch, epr, teleport, fourier, ...).
const Env& env(Calculus c);

// parse() with the standard environment attached.
TermPtr parse_program(const std::string& source, Calculus c = Calculus::LambdaQ);

}  // namespace qlam::prelude
