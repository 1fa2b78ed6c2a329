#pragma once

#include <map>
#include <string>
#include <vector>

#include "qlam/term.hpp"

namespace qlam {

enum class Linearity { Linear, Nonlinear };

enum class ViolationKind {
  LinearUsedZero,   // linear binder never used
  LinearUsedMany,   // linear binder used more than once
  LinearUnderBang,  // linear variable free inside a !-suspension
  DuplicateBinder,  // duplicate variable in an ambient context
};

const char* violation_kind_name(ViolationKind k);

struct Violation {
  ViolationKind kind;
  Path location;  // the offending abstraction / bang / occurrence
  std::string binder;
};

// Ambient assumptions for free variables: index -> linearity, innermost
// binder first (de Bruijn index 0).
using CheckContext = std::vector<Linearity>;

// Syntax-directed reading of the well-formedness rules: a linearly bound
// variable occurs exactly once in its scope, a nonlinear one any number of
// times, and every free variable of a !-subterm is nonlinear.
std::vector<Violation> check_well_formed(const TermPtr& t);
std::vector<Violation> check_well_formed(const TermPtr& t,
                                         const CheckContext& ctx);
bool is_well_formed(const TermPtr& t);

struct Usage {
  int count = 0;
  bool under_bang = false;
};

// Occurrence counts of free variables (by de Bruijn index), with a flag for
// occurrences inside a !-suspension.
std::map<int, Usage> free_linear_uses(const TermPtr& t);

}  // namespace qlam
