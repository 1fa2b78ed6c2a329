#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlam {

// Which calculus the machine / value grammar is operating in.
enum class Calculus { LambdaI, LambdaQ };

enum class ConstId { Bit0, Bit1, H, S, R, Cnot, X, Y, Z, CPhase };

const char* const_name(ConstId c);
bool const_is_bit(ConstId c);
bool const_is_gate(ConstId c);
// {H, S, R, cnot} form a universal gate set.
bool const_is_universal(ConstId c);
// Number of bit slots a gate acts on (1 or 2); 0 for the bit constants.
int const_bit_arity(ConstId c);

enum class TermKind {
  Var,        // de Bruijn index
  Lam,        // linear abstraction, body in `a`
  BangLam,    // nonlinear abstraction, body in `a`
  ErasedLam,  // binder-erased abstraction "(phi. body)", machine output only
  App,        // fun `a`, arg `b`
  Const,
  Bang,       // !-suspension, inner in `a`
  Placeholder,
  Hole,       // term-context hole, never produced by evaluation
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable term node. Terms are stored nameless (de Bruijn); `hint` keeps
// the source binder/variable name for printing and is ignored by equality.
struct Term {
  TermKind kind;
  int index = 0;
  std::string hint;
  ConstId cid = ConstId::Bit0;
  TermPtr a;
  TermPtr b;
};

TermPtr var(int index, std::string hint = {});
TermPtr lam(std::string hint, TermPtr body);
TermPtr bang_lam(std::string hint, TermPtr body);
TermPtr erased_lam(TermPtr body);
TermPtr app(TermPtr fun, TermPtr arg);
TermPtr cnst(ConstId c);
TermPtr bang(TermPtr inner);
TermPtr placeholder();
TermPtr hole();

// Total order / equality on the nameless structure (hints ignored).
int term_cmp(const TermPtr& x, const TermPtr& y);
bool term_eq(const TermPtr& x, const TermPtr& y);

// Canonical serialization; equal terms produce equal keys.
std::string term_key(const TermPtr& t);

bool contains_var(const TermPtr& t, int index);
TermPtr shift(const TermPtr& t, int delta, int cutoff = 0);

// Instantiate the body of an abstraction: Var(0) := value (capture avoiding,
// indices above the binder are decremented).
TermPtr substitute(const TermPtr& body, const TermPtr& value);

// Bar-erasure of an abstraction body (binder = index 0 at entry): maximal
// subterms not containing the binder become Placeholder, kept abstractions
// print their binder slot as "phi.".
TermPtr erase_keep(const TermPtr& body);

// Identical shape up to Bit0/Bit1 leaves.
bool congruent(const TermPtr& x, const TermPtr& y);

// Value grammar of the selected calculus (lambda_q adds nonlinear
// abstraction and !-suspension).
bool is_value(const TermPtr& t, Calculus calc);

// Value predicate used by the evaluator: additionally treats a partially
// applied parameterized gate (cphase !n) as a value.
bool is_eval_value(const TermPtr& t, Calculus calc);

// Gate operator in operator position: a gate constant, or (cphase !n).
bool is_gate_operator(const TermPtr& t);

std::string pretty(const TermPtr& t);

// Path from a term root: App fun=0 arg=1; abstraction/Bang body=0.
using Path = std::vector<int>;
std::string path_str(const Path& p);
TermPtr subterm_at(const TermPtr& t, const Path& p);
TermPtr replace_at(const TermPtr& t, const Path& p, const TermPtr& sub);

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SyntaxError : Error {
  int line, column;
  SyntaxError(std::string msg, int line_, int col_)
      : Error(std::move(msg)), line(line_), column(col_) {}
};
struct UnknownConstant : SyntaxError {
  using SyntaxError::SyntaxError;
};
struct SlotNotBit : Error {
  using Error::Error;
};
struct IllFormedRegister : Error {
  using Error::Error;
};
struct MalformedHistory : Error {
  using Error::Error;
};

}  // namespace qlam
