#include "qlam/term.hpp"

#include <algorithm>
#include <sstream>

namespace qlam {

const char* const_name(ConstId c) {
  switch (c) {
    case ConstId::Bit0: return "0";
    case ConstId::Bit1: return "1";
    case ConstId::H: return "H";
    case ConstId::S: return "S";
    case ConstId::R: return "R";
    case ConstId::Cnot: return "cnot";
    case ConstId::X: return "X";
    case ConstId::Y: return "Y";
    case ConstId::Z: return "Z";
    case ConstId::CPhase: return "cphase";
  }
  return "?";
}

bool const_is_bit(ConstId c) { return c == ConstId::Bit0 || c == ConstId::Bit1; }

bool const_is_gate(ConstId c) { return !const_is_bit(c); }

bool const_is_universal(ConstId c) {
  return c == ConstId::H || c == ConstId::S || c == ConstId::R ||
         c == ConstId::Cnot;
}

int const_bit_arity(ConstId c) {
  switch (c) {
    case ConstId::Bit0:
    case ConstId::Bit1: return 0;
    case ConstId::Cnot:
    case ConstId::CPhase: return 2;
    default: return 1;
  }
}

static TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }

TermPtr var(int index, std::string hint) {
  return make({.kind = TermKind::Var, .index = index, .hint = std::move(hint)});
}
TermPtr lam(std::string hint, TermPtr body) {
  return make({.kind = TermKind::Lam, .hint = std::move(hint), .a = std::move(body)});
}
TermPtr bang_lam(std::string hint, TermPtr body) {
  return make({.kind = TermKind::BangLam, .hint = std::move(hint), .a = std::move(body)});
}
TermPtr erased_lam(TermPtr body) {
  return make({.kind = TermKind::ErasedLam, .a = std::move(body)});
}
TermPtr app(TermPtr fun, TermPtr arg) {
  return make({.kind = TermKind::App, .a = std::move(fun), .b = std::move(arg)});
}
TermPtr cnst(ConstId c) { return make({.kind = TermKind::Const, .cid = c}); }
TermPtr bang(TermPtr inner) {
  return make({.kind = TermKind::Bang, .a = std::move(inner)});
}
TermPtr placeholder() {
  static TermPtr p = make({.kind = TermKind::Placeholder});
  return p;
}
TermPtr hole() {
  static TermPtr h = make({.kind = TermKind::Hole});
  return h;
}

int term_cmp(const TermPtr& x, const TermPtr& y) {
  if (x.get() == y.get()) return 0;
  if (x->kind != y->kind) return x->kind < y->kind ? -1 : 1;
  switch (x->kind) {
    case TermKind::Var:
      return x->index == y->index ? 0 : (x->index < y->index ? -1 : 1);
    case TermKind::Const:
      return x->cid == y->cid ? 0 : (x->cid < y->cid ? -1 : 1);
    case TermKind::Placeholder:
    case TermKind::Hole:
      return 0;
    case TermKind::Lam:
    case TermKind::BangLam:
    case TermKind::ErasedLam:
    case TermKind::Bang:
      return term_cmp(x->a, y->a);
    case TermKind::App: {
      int c = term_cmp(x->a, y->a);
      return c != 0 ? c : term_cmp(x->b, y->b);
    }
  }
  return 0;
}

bool term_eq(const TermPtr& x, const TermPtr& y) { return term_cmp(x, y) == 0; }

static void key_rec(const TermPtr& t, std::string& out) {
  switch (t->kind) {
    case TermKind::Var:
      out += 'v';
      out += std::to_string(t->index);
      out += ';';
      break;
    case TermKind::Lam: out += 'L'; key_rec(t->a, out); break;
    case TermKind::BangLam: out += 'B'; key_rec(t->a, out); break;
    case TermKind::ErasedLam: out += 'E'; key_rec(t->a, out); break;
    case TermKind::Bang: out += '!'; key_rec(t->a, out); break;
    case TermKind::App:
      out += '(';
      key_rec(t->a, out);
      key_rec(t->b, out);
      out += ')';
      break;
    case TermKind::Const:
      out += 'c';
      out += std::to_string(static_cast<int>(t->cid));
      out += ';';
      break;
    case TermKind::Placeholder: out += 'p'; break;
    case TermKind::Hole: out += 'h'; break;
  }
}

std::string term_key(const TermPtr& t) {
  std::string out;
  key_rec(t, out);
  return out;
}

bool contains_var(const TermPtr& t, int index) {
  switch (t->kind) {
    case TermKind::Var: return t->index == index;
    case TermKind::Lam:
    case TermKind::BangLam:
    case TermKind::ErasedLam:
      return contains_var(t->a, index + 1);
    case TermKind::Bang: return contains_var(t->a, index);
    case TermKind::App:
      return contains_var(t->a, index) || contains_var(t->b, index);
    default: return false;
  }
}

TermPtr shift(const TermPtr& t, int delta, int cutoff) {
  switch (t->kind) {
    case TermKind::Var:
      if (t->index >= cutoff) return var(t->index + delta, t->hint);
      return t;
    case TermKind::Lam: return lam(t->hint, shift(t->a, delta, cutoff + 1));
    case TermKind::BangLam:
      return bang_lam(t->hint, shift(t->a, delta, cutoff + 1));
    case TermKind::ErasedLam: return erased_lam(shift(t->a, delta, cutoff + 1));
    case TermKind::Bang: return bang(shift(t->a, delta, cutoff));
    case TermKind::App:
      return app(shift(t->a, delta, cutoff), shift(t->b, delta, cutoff));
    default: return t;
  }
}

static TermPtr subst_rec(const TermPtr& t, const TermPtr& value, int depth) {
  switch (t->kind) {
    case TermKind::Var:
      if (t->index == depth) return shift(value, depth);
      if (t->index > depth) return var(t->index - 1, t->hint);
      return t;
    case TermKind::Lam: return lam(t->hint, subst_rec(t->a, value, depth + 1));
    case TermKind::BangLam:
      return bang_lam(t->hint, subst_rec(t->a, value, depth + 1));
    case TermKind::ErasedLam:
      return erased_lam(subst_rec(t->a, value, depth + 1));
    case TermKind::Bang: return bang(subst_rec(t->a, value, depth));
    case TermKind::App:
      return app(subst_rec(t->a, value, depth), subst_rec(t->b, value, depth));
    default: return t;
  }
}

TermPtr substitute(const TermPtr& body, const TermPtr& value) {
  return subst_rec(body, value, 0);
}

static TermPtr erase_rec(const TermPtr& t, int depth) {
  if (!contains_var(t, depth)) return placeholder();
  switch (t->kind) {
    case TermKind::Var: return t;  // the kept binder occurrence
    case TermKind::Lam:
    case TermKind::BangLam:
    case TermKind::ErasedLam:
      return erased_lam(erase_rec(t->a, depth + 1));
    case TermKind::Bang: return bang(erase_rec(t->a, depth));
    case TermKind::App:
      return app(erase_rec(t->a, depth), erase_rec(t->b, depth));
    default: return placeholder();
  }
}

TermPtr erase_keep(const TermPtr& body) { return erase_rec(body, 0); }

bool congruent(const TermPtr& x, const TermPtr& y) {
  if (x->kind == TermKind::Const && y->kind == TermKind::Const) {
    if (const_is_bit(x->cid) && const_is_bit(y->cid)) return true;
    return x->cid == y->cid;
  }
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case TermKind::Var: return x->index == y->index;
    case TermKind::Lam:
    case TermKind::BangLam:
    case TermKind::ErasedLam:
    case TermKind::Bang:
      return congruent(x->a, y->a);
    case TermKind::App:
      return congruent(x->a, y->a) && congruent(x->b, y->b);
    default: return true;
  }
}

bool is_value(const TermPtr& t, Calculus calc) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Const:
    case TermKind::Lam:
      return true;
    case TermKind::BangLam:
    case TermKind::Bang:
      return calc == Calculus::LambdaQ;
    default: return false;
  }
}

bool is_gate_operator(const TermPtr& t) {
  if (t->kind == TermKind::Const && const_is_gate(t->cid) &&
      t->cid != ConstId::CPhase)
    return true;
  // (cphase !n): a parameterized two-bit gate value.
  return t->kind == TermKind::App && t->a->kind == TermKind::Const &&
         t->a->cid == ConstId::CPhase && t->b->kind == TermKind::Bang;
}

bool is_eval_value(const TermPtr& t, Calculus calc) {
  if (is_value(t, calc)) return true;
  return calc == Calculus::LambdaQ && t->kind == TermKind::App &&
         is_gate_operator(t);
}

// ---- printing ----------------------------------------------------------

namespace {

struct Printer {
  std::vector<std::string> env;  // innermost binder last
  std::ostringstream out;

  std::string fresh(const std::string& hint) {
    std::string base = hint.empty() ? "x" : hint;
    std::string name = base;
    int k = 1;
    while (std::find(env.begin(), env.end(), name) != env.end())
      name = base + std::to_string(k++);
    return name;
  }

  // prec 0: term (lam bodies), 1: application, 2: atom
  void print(const TermPtr& t, int prec) {
    switch (t->kind) {
      case TermKind::Var: {
        int pos = static_cast<int>(env.size()) - 1 - t->index;
        if (pos >= 0)
          out << env[pos];
        else if (!t->hint.empty())
          out << t->hint;
        else
          out << "#" << t->index;
        break;
      }
      case TermKind::Lam:
      case TermKind::BangLam: {
        if (prec > 0) out << "(";
        std::string name = fresh(t->hint);
        out << (t->kind == TermKind::Lam ? "\\" : "\\!") << name << ".";
        env.push_back(name);
        print(t->a, 0);
        env.pop_back();
        if (prec > 0) out << ")";
        break;
      }
      case TermKind::ErasedLam: {
        out << "(φ.";
        env.push_back("φ");
        print(t->a, 0);
        env.pop_back();
        out << ")";
        break;
      }
      case TermKind::App: {
        if (prec > 1) out << "(";
        print(t->a, 1);
        out << " ";
        print(t->b, 2);
        if (prec > 1) out << ")";
        break;
      }
      case TermKind::Const: out << const_name(t->cid); break;
      case TermKind::Bang:
        out << "!";
        print(t->a, 2);
        break;
      case TermKind::Placeholder: out << "φ"; break;
      case TermKind::Hole: out << "[]"; break;
    }
  }
};

}  // namespace

std::string pretty(const TermPtr& t) {
  Printer p;
  p.print(t, 0);
  return p.out.str();
}

std::string path_str(const Path& p) {
  if (p.empty()) return ".";
  std::string s;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(p[i]);
  }
  return s;
}

TermPtr subterm_at(const TermPtr& t, const Path& p) {
  TermPtr cur = t;
  for (int step : p) {
    if (cur->kind == TermKind::App)
      cur = step == 0 ? cur->a : cur->b;
    else if (cur->a)
      cur = cur->a;
    else
      throw Error("subterm_at: path leaves the term");
  }
  return cur;
}

static TermPtr replace_rec(const TermPtr& t, const Path& p, size_t i,
                           const TermPtr& sub) {
  if (i == p.size()) return sub;
  switch (t->kind) {
    case TermKind::App:
      if (p[i] == 0) return app(replace_rec(t->a, p, i + 1, sub), t->b);
      return app(t->a, replace_rec(t->b, p, i + 1, sub));
    case TermKind::Lam: return lam(t->hint, replace_rec(t->a, p, i + 1, sub));
    case TermKind::BangLam:
      return bang_lam(t->hint, replace_rec(t->a, p, i + 1, sub));
    case TermKind::ErasedLam:
      return erased_lam(replace_rec(t->a, p, i + 1, sub));
    case TermKind::Bang: return bang(replace_rec(t->a, p, i + 1, sub));
    default: throw Error("replace_at: path leaves the term");
  }
}

TermPtr replace_at(const TermPtr& t, const Path& p, const TermPtr& sub) {
  return replace_rec(t, p, 0, sub);
}

}  // namespace qlam
