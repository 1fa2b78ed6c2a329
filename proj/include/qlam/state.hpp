#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlam/term.hpp"

namespace qlam {

using Amplitude = std::complex<double>;

inline constexpr double kPruneThreshold = 1e-12;

// One basis configuration: history track h1;...;hn plus the computational
// register.
struct Configuration {
  std::vector<TermPtr> history;
  TermPtr reg;
};

int config_cmp(const Configuration& a, const Configuration& b);

struct ConfigLess {
  bool operator()(const Configuration& a, const Configuration& b) const {
    return config_cmp(a, b) < 0;
  }
};

struct TermLess {
  bool operator()(const TermPtr& a, const TermPtr& b) const {
    return term_cmp(a, b) < 0;
  }
};

// Finite superposition of configurations; iteration order is the canonical
// term order, so printing and tests are deterministic.
using Superposition = std::map<Configuration, Amplitude, ConfigLess>;

Superposition singleton(TermPtr reg, std::vector<TermPtr> history = {});

// Sum of |amplitude|^2.
double norm(const Superposition& psi);

// Drop entries below the prune threshold.
void prune(Superposition& psi);

// A bit slot: path from the register root to a 0/1 constant leaf. Valid for
// every branch of a congruent superposition simultaneously.
using BitSlot = Path;

struct GateSpec {
  ConstId id;
  int arity;              // bit slots acted on
  Eigen::MatrixXcd u;     // 2^arity x 2^arity unitary
};

const GateSpec& gate_spec(ConstId c);  // H, S, R, X, Y, Z, cnot
GateSpec cphase_spec(int n);           // diag(1,1,1,e^{2*pi*i/2^n})

// Apply a k-bit unitary at the given register slots: branches are grouped by
// their configuration with the slot bits blanked, the 2^k amplitude vector of
// each group is multiplied by U, and the results are merged and pruned.
// Throws SlotNotBit if some branch lacks a bit constant at a slot.
Superposition apply_unitary(const Superposition& psi,
                            const std::vector<BitSlot>& slots,
                            const GateSpec& gate);

// Gate operand recognition: a single bit constant, or a fully reduced
// two-element tuple value with bit leaves. Returns bit-slot paths relative
// to the operand (shape check only; non-bit leaves in congruent branches are
// caught by apply_unitary).
std::optional<std::vector<BitSlot>> gate_operand_slots(const TermPtr& operand,
                                                       int arity);

struct FactoredState {
  std::vector<TermPtr> history;
  std::map<TermPtr, Amplitude, TermLess> register_marginal;
};

// If every branch carries one identical history, split it off; otherwise the
// state is not a direct product |H> (x) |c|>.
std::optional<FactoredState> factor_history(const Superposition& psi);

struct DensityMatrix {
  std::vector<TermPtr> labels;  // distinct register terms, canonical order
  Eigen::MatrixXcd rho;
};

// Register marginal rho = tr_history |psi><psi|.
DensityMatrix density_matrix(const Superposition& psi);

// Invariant check: all registers pairwise congruent, all histories congruent
// entry by entry. Returns a description of the first offending pair, or
// nullopt when the state is congruent.
std::optional<std::string> check_congruence(const Superposition& psi);

// One line per branch: "(re,im)  h1 ; h2 ; ... ; register".
std::string print_state(const Superposition& psi);
std::string format_amplitude(const Amplitude& a);

}  // namespace qlam
