#include "qlam/state.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qlam {

int config_cmp(const Configuration& a, const Configuration& b) {
  if (a.history.size() != b.history.size())
    return a.history.size() < b.history.size() ? -1 : 1;
  for (size_t i = 0; i < a.history.size(); ++i) {
    int c = term_cmp(a.history[i], b.history[i]);
    if (c != 0) return c;
  }
  return term_cmp(a.reg, b.reg);
}

Superposition singleton(TermPtr reg, std::vector<TermPtr> history) {
  Superposition psi;
  psi[{std::move(history), std::move(reg)}] = Amplitude(1.0, 0.0);
  return psi;
}

double norm(const Superposition& psi) {
  double n = 0.0;
  for (auto& [cfg, amp] : psi) n += std::norm(amp);
  return n;
}

void prune(Superposition& psi) {
  for (auto it = psi.begin(); it != psi.end();)
    if (std::abs(it->second) <= kPruneThreshold)
      it = psi.erase(it);
    else
      ++it;
}

// ---- gate table ------------------------------------------------------------

namespace {

using Eigen::MatrixXcd;
using std::numbers::pi;

MatrixXcd mat2(Amplitude a, Amplitude b, Amplitude c, Amplitude d) {
  MatrixXcd m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

const GateSpec& gate_spec(ConstId c) {
  static const double s = 1.0 / std::sqrt(2.0);
  static const Amplitude i(0.0, 1.0);
  static const std::map<ConstId, GateSpec> table = [] {
    std::map<ConstId, GateSpec> t;
    t[ConstId::H] = {ConstId::H, 1, mat2(s, s, s, -s)};
    t[ConstId::S] = {ConstId::S, 1, mat2(1, 0, 0, i)};
    t[ConstId::R] = {ConstId::R, 1,
                     mat2(1, 0, 0, std::exp(i * (pi / 4.0)))};
    t[ConstId::X] = {ConstId::X, 1, mat2(0, 1, 1, 0)};
    t[ConstId::Y] = {ConstId::Y, 1, mat2(0, -i, i, 0)};
    t[ConstId::Z] = {ConstId::Z, 1, mat2(1, 0, 0, -1)};
    MatrixXcd cx = MatrixXcd::Zero(4, 4);
    cx(0, 0) = 1; cx(1, 1) = 1; cx(2, 3) = 1; cx(3, 2) = 1;  // (a,b)->(a,a^b)
    t[ConstId::Cnot] = {ConstId::Cnot, 2, cx};
    return t;
  }();
  auto it = table.find(c);
  if (it == table.end()) throw Error("no gate matrix for this constant");
  return it->second;
}

GateSpec cphase_spec(int n) {
  if (n < 1) throw Error("cphase parameter must be >= 1");
  MatrixXcd m = MatrixXcd::Identity(4, 4);
  m(3, 3) = std::exp(Amplitude(0.0, 2.0 * pi / std::pow(2.0, n)));
  return {ConstId::CPhase, 2, m};
}

// ---- slots -----------------------------------------------------------------

namespace {

bool is_abs(const TermPtr& t) {
  return t->kind == TermKind::Lam || t->kind == TermKind::BangLam;
}

// Fully reduced cons-cell value \x.\y.((y h) t): yields paths of h and t.
bool cons_value(const TermPtr& t, Path& head, Path& tail) {
  if (!is_abs(t) || !is_abs(t->a)) return false;
  const TermPtr& body = t->a->a;
  if (body->kind != TermKind::App || body->a->kind != TermKind::App)
    return false;
  const TermPtr& y = body->a->a;
  if (y->kind != TermKind::Var || y->index != 0) return false;
  head = {0, 0, 0, 1};
  tail = {0, 0, 1};
  return true;
}

// Empty-list value \x.\y.(x ...).
bool nil_value(const TermPtr& t) {
  if (!is_abs(t) || !is_abs(t->a)) return false;
  const TermPtr& body = t->a->a;
  return body->kind == TermKind::App && body->a->kind == TermKind::Var &&
         body->a->index == 1;
}

Path operator+(Path a, const Path& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

std::optional<std::vector<BitSlot>> gate_operand_slots(const TermPtr& operand,
                                                       int arity) {
  if (arity == 1) {
    if (operand->kind == TermKind::Const && const_is_bit(operand->cid))
      return std::vector<BitSlot>{Path{}};
    return std::nullopt;
  }
  // Two bits arrive as a two-element tuple value (1,0) = 1:0:empty.
  Path h1, t1, h2, t2;
  if (!cons_value(operand, h1, t1)) return std::nullopt;
  TermPtr tail = subterm_at(operand, t1);
  if (!cons_value(tail, h2, t2)) return std::nullopt;
  if (!nil_value(subterm_at(tail, t2))) return std::nullopt;
  TermPtr b1 = subterm_at(operand, h1);
  TermPtr b2 = subterm_at(tail, h2);
  auto is_bit = [](const TermPtr& t) {
    return t->kind == TermKind::Const && const_is_bit(t->cid);
  };
  if (!is_bit(b1) || !is_bit(b2)) return std::nullopt;
  return std::vector<BitSlot>{h1, t1 + h2};
}

// ---- unitary application ---------------------------------------------------

Superposition apply_unitary(const Superposition& psi,
                            const std::vector<BitSlot>& slots,
                            const GateSpec& gate) {
  if (static_cast<int>(slots.size()) != gate.arity)
    throw Error("slot count does not match gate arity");
  const int dim = 1 << gate.arity;

  struct Group {
    Configuration blanked;
    Eigen::VectorXcd amps;
  };
  std::map<Configuration, Group, ConfigLess> groups;

  for (auto& [cfg, amp] : psi) {
    int index = 0;
    TermPtr blanked_reg = cfg.reg;
    for (auto& slot : slots) {
      TermPtr leaf = subterm_at(cfg.reg, slot);
      if (leaf->kind != TermKind::Const || !const_is_bit(leaf->cid))
        throw SlotNotBit("gate slot does not hold a bit constant at " +
                         path_str(slot));
      index = (index << 1) | (leaf->cid == ConstId::Bit1 ? 1 : 0);
      blanked_reg = replace_at(blanked_reg, slot, hole());
    }
    Configuration key{cfg.history, blanked_reg};
    auto [it, fresh] = groups.try_emplace(key, Group{key, {}});
    if (fresh) it->second.amps = Eigen::VectorXcd::Zero(dim);
    it->second.amps(index) += amp;
  }

  Superposition out;
  for (auto& [key, g] : groups) {
    Eigen::VectorXcd mixed = gate.u * g.amps;
    for (int idx = 0; idx < dim; ++idx) {
      if (std::abs(mixed(idx)) <= kPruneThreshold) continue;
      TermPtr reg = g.blanked.reg;
      for (size_t s = 0; s < slots.size(); ++s) {
        int bit = (idx >> (slots.size() - 1 - s)) & 1;
        reg = replace_at(reg, slots[s],
                         cnst(bit ? ConstId::Bit1 : ConstId::Bit0));
      }
      out[{g.blanked.history, reg}] += mixed(idx);
    }
  }
  prune(out);
  return out;
}

// ---- factoring, density, congruence ----------------------------------------

std::optional<FactoredState> factor_history(const Superposition& psi) {
  if (psi.empty()) return std::nullopt;
  FactoredState f;
  f.history = psi.begin()->first.history;
  for (auto& [cfg, amp] : psi) {
    if (cfg.history.size() != f.history.size()) return std::nullopt;
    for (size_t i = 0; i < f.history.size(); ++i)
      if (!term_eq(cfg.history[i], f.history[i])) return std::nullopt;
    f.register_marginal[cfg.reg] += amp;
  }
  return f;
}

DensityMatrix density_matrix(const Superposition& psi) {
  std::map<TermPtr, int, TermLess> index;
  for (auto& [cfg, amp] : psi) index.emplace(cfg.reg, 0);
  int k = 0;
  DensityMatrix d;
  for (auto& [t, i] : index) {
    i = k++;
    d.labels.push_back(t);
  }
  d.rho = Eigen::MatrixXcd::Zero(k, k);
  // rho[i][j] = sum over shared histories of psi(h,ri) * conj(psi(h,rj)).
  std::map<std::vector<TermPtr>, std::vector<std::pair<int, Amplitude>>,
           decltype([](const std::vector<TermPtr>& a,
                       const std::vector<TermPtr>& b) {
             if (a.size() != b.size()) return a.size() < b.size();
             for (size_t i = 0; i < a.size(); ++i) {
               int c = term_cmp(a[i], b[i]);
               if (c != 0) return c < 0;
             }
             return false;
           })>
      by_history;
  for (auto& [cfg, amp] : psi)
    by_history[cfg.history].emplace_back(index[cfg.reg], amp);
  for (auto& [h, entries] : by_history)
    for (auto& [i, ai] : entries)
      for (auto& [j, aj] : entries) d.rho(i, j) += ai * std::conj(aj);
  return d;
}

std::optional<std::string> check_congruence(const Superposition& psi) {
  if (psi.empty()) return std::nullopt;
  const Configuration& first = psi.begin()->first;
  for (auto& [cfg, amp] : psi) {
    if (!congruent(cfg.reg, first.reg))
      return "registers not congruent: " + pretty(first.reg) + "  vs  " +
             pretty(cfg.reg);
    if (cfg.history.size() != first.history.size())
      return "history lengths differ";
    for (size_t i = 0; i < cfg.history.size(); ++i)
      if (!congruent(cfg.history[i], first.history[i]))
        return "histories not congruent at entry " + std::to_string(i);
  }
  return std::nullopt;
}

std::string format_amplitude(const Amplitude& a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.6f,%.6f)", a.real(), a.imag());
  return buf;
}

std::string print_state(const Superposition& psi) {
  std::ostringstream out;
  for (auto& [cfg, amp] : psi) {
    out << format_amplitude(amp) << "  ";
    for (auto& h : cfg.history) out << pretty(h) << " ; ";
    out << pretty(cfg.reg) << "\n";
  }
  return out.str();
}

}  // namespace qlam
