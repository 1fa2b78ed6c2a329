#pragma once

#include <map>
#include <string>

#include "qlam/term.hpp"

namespace qlam {

// Named, closed terms made visible to source programs (prelude combinators,
// REPL bindings). Values must be closed.
using Env = std::map<std::string, TermPtr>;

// Parse concrete syntax into a canonical nameless term.
//
//   term  := "\" x "." term | "\!" x "." term
//          | "let" pat "=" term "in" term
//          | "case" term "of" "(" alts ")"
//          | cons
//   cons  := app (":" cons)?
//   app   := atom+                          (left associative)
//   atom  := ident | const | NATn | "!" atom
//          | "(" term ("," term)* ")" | "[" (term ("," term)*)? "]"
//   pat   := x | "(" x "," x ("," x)* ")" | x ":" x
//   alts  := "empty" "->" term "," x ":" x "->" term
//          | "0" "->" term "," "suc" x "->" term
//
// "--" starts a comment. "(e1, e2, ...)" with two or more elements is a
// tuple literal; "[e]" is the one-element tuple. Decimal literals with a
// trailing "n" ("2n") are Church numerals. In LambdaI mode the "!" and "\!"
// forms are rejected.
//
// Sugar is desugared into the core calculus, adapted to the linear
// discipline in LambdaQ mode: tuple "let" goes through a continuation-style
// splitter, and "case" branches that mention linear variables from the
// enclosing scope have those variables threaded in as extra arguments
// applied outside the !-suspended branches (the corrected-append pattern).
TermPtr parse(const std::string& source, Calculus calc, const Env& env);
TermPtr parse(const std::string& source, Calculus calc = Calculus::LambdaQ);

}  // namespace qlam
