#include "qlam/linearity.hpp"

namespace qlam {

const char* violation_kind_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::LinearUsedZero: return "linear-used-zero";
    case ViolationKind::LinearUsedMany: return "linear-used-many";
    case ViolationKind::LinearUnderBang: return "linear-under-bang";
    case ViolationKind::DuplicateBinder: return "duplicate-binder";
  }
  return "?";
}

namespace {

struct Checker {
  std::vector<Violation> violations;
  // Stack of binders, innermost last: linearity plus use accounting.
  struct Slot {
    Linearity lin;
    std::string name;
    int bang_at = 0;  // suspension depth where the binder was introduced
    int count = 0;
    bool under_bang = false;
  };
  std::vector<Slot> stack;
  Path path;

  void visit(const TermPtr& t, int bang_depth) {
    switch (t->kind) {
      case TermKind::Var: {
        int pos = static_cast<int>(stack.size()) - 1 - t->index;
        if (pos >= 0) {
          stack[pos].count += 1;
          // Only occurrences under a suspension entered after binding count.
          if (bang_depth > stack[pos].bang_at) stack[pos].under_bang = true;
        }
        break;
      }
      case TermKind::Lam:
      case TermKind::BangLam: {
        bool linear = t->kind == TermKind::Lam;
        stack.push_back({linear ? Linearity::Linear : Linearity::Nonlinear,
                         t->hint, bang_depth});
        path.push_back(0);
        visit(t->a, bang_depth);
        path.pop_back();
        Slot s = stack.back();
        stack.pop_back();
        if (linear) {
          if (s.count == 0)
            violations.push_back({ViolationKind::LinearUsedZero, path, s.name});
          else if (s.count > 1)
            violations.push_back({ViolationKind::LinearUsedMany, path, s.name});
          if (s.under_bang)
            violations.push_back({ViolationKind::LinearUnderBang, path, s.name});
        }
        break;
      }
      case TermKind::ErasedLam:
        stack.push_back({Linearity::Nonlinear, "", bang_depth});
        path.push_back(0);
        visit(t->a, bang_depth);
        path.pop_back();
        stack.pop_back();
        break;
      case TermKind::Bang:
        path.push_back(0);
        visit(t->a, bang_depth + 1);
        path.pop_back();
        break;
      case TermKind::App:
        path.push_back(0);
        visit(t->a, bang_depth);
        path.back() = 1;
        visit(t->b, bang_depth);
        path.pop_back();
        break;
      default: break;
    }
  }
};

}  // namespace

std::vector<Violation> check_well_formed(const TermPtr& t,
                                         const CheckContext& ctx) {
  Checker c;
  // Ambient context: index 0 is innermost, so push in reverse.
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
    c.stack.push_back({*it, "ctx" + std::to_string(c.stack.size())});
  c.visit(t, 0);
  // Ambient linear variables: flag under-bang occurrences (counts are the
  // caller's business via free_linear_uses).
  for (size_t i = 0; i < ctx.size(); ++i) {
    const auto& s = c.stack[ctx.size() - 1 - i];
    if (s.lin == Linearity::Linear && s.under_bang)
      c.violations.push_back(
          {ViolationKind::LinearUnderBang, {}, "#" + std::to_string(i)});
  }
  return c.violations;
}

std::vector<Violation> check_well_formed(const TermPtr& t) {
  return check_well_formed(t, {});
}

bool is_well_formed(const TermPtr& t) { return check_well_formed(t).empty(); }

namespace {

void count_free(const TermPtr& t, int depth, int bang_depth,
                std::map<int, Usage>& out) {
  switch (t->kind) {
    case TermKind::Var:
      if (t->index >= depth) {
        Usage& u = out[t->index - depth];
        u.count += 1;
        if (bang_depth > 0) u.under_bang = true;
      }
      break;
    case TermKind::Lam:
    case TermKind::BangLam:
    case TermKind::ErasedLam:
      count_free(t->a, depth + 1, bang_depth, out);
      break;
    case TermKind::Bang: count_free(t->a, depth, bang_depth + 1, out); break;
    case TermKind::App:
      count_free(t->a, depth, bang_depth, out);
      count_free(t->b, depth, bang_depth, out);
      break;
    default: break;
  }
}

}  // namespace

std::map<int, Usage> free_linear_uses(const TermPtr& t) {
  std::map<int, Usage> out;
  count_free(t, 0, 0, out);
  return out;
}

}  // namespace qlam
