#include "qlam/parser.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <set>
#include <vector>

#include "qlam/prelude.hpp"

namespace qlam {

namespace {

// ---- tokens --------------------------------------------------------------

enum class Tok {
  Ident, Const, Nat,
  Lambda, BangLambda, Bang,
  Dot, LParen, RParen, LBrack, RBrack, Comma, Colon, Eq, Arrow,
  KwLet, KwIn, KwCase, KwOf, KwEmpty, KwSuc,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  ConstId cid = ConstId::Bit0;
  long nat = 0;
  int line = 1, col = 1;
};

bool lookup_const(const std::string& s, ConstId& out) {
  static const std::pair<const char*, ConstId> table[] = {
      {"0", ConstId::Bit0}, {"1", ConstId::Bit1},  {"H", ConstId::H},
      {"S", ConstId::S},    {"R", ConstId::R},     {"cnot", ConstId::Cnot},
      {"X", ConstId::X},    {"Y", ConstId::Y},     {"Z", ConstId::Z},
      {"cphase", ConstId::CPhase},
  };
  for (auto& [n, c] : table)
    if (s == n) {
      out = c;
      return true;
    }
  return false;
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Tok k, std::string text = {}) {
    out.push_back({k, std::move(text), ConstId::Bit0, 0, line, col});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') { ++i; ++line; col = 1; continue; }
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; ++col; continue; }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    int tl = line, tc = col;
    auto err = [&](const std::string& msg) { throw SyntaxError(msg, tl, tc); };
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      push(Tok::Arrow); i += 2; col += 2; continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == 'n' &&
          (j + 1 >= src.size() ||
           !(std::isalnum(static_cast<unsigned char>(src[j + 1])) ||
             src[j + 1] == '_' || src[j + 1] == '\''))) {
        Token t{Tok::Nat, src.substr(i, j - i + 1), ConstId::Bit0,
                std::stol(src.substr(i, j - i)), tl, tc};
        out.push_back(t);
        col += static_cast<int>(j - i + 1);
        i = j + 1;
        continue;
      }
      std::string digits = src.substr(i, j - i);
      if (digits == "0" || digits == "1") {
        Token t{Tok::Const, digits,
                digits == "0" ? ConstId::Bit0 : ConstId::Bit1, 0, tl, tc};
        out.push_back(t);
        col += static_cast<int>(j - i);
        i = j;
        continue;
      }
      err("bare numeral '" + digits + "' (Church numerals are written '" +
          digits + "n')");
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) ||
              src[j] == '_' || src[j] == '\''))
        ++j;
      std::string word = src.substr(i, j - i);
      col += static_cast<int>(j - i);
      i = j;
      Token t{Tok::Ident, word, ConstId::Bit0, 0, tl, tc};
      if (word == "let") t.kind = Tok::KwLet;
      else if (word == "in") t.kind = Tok::KwIn;
      else if (word == "case") t.kind = Tok::KwCase;
      else if (word == "of") t.kind = Tok::KwOf;
      else if (word == "empty") t.kind = Tok::KwEmpty;
      else if (word == "suc") t.kind = Tok::KwSuc;
      else if (lookup_const(word, t.cid)) t.kind = Tok::Const;
      else if (std::isupper(static_cast<unsigned char>(word[0])))
        throw UnknownConstant("unknown constant '" + word + "'", tl, tc);
      out.push_back(t);
      continue;
    }
    switch (c) {
      case '\\':
        if (i + 1 < src.size() && src[i + 1] == '!') {
          push(Tok::BangLambda); i += 2; col += 2;
        } else {
          push(Tok::Lambda); ++i; ++col;
        }
        continue;
      case '!': push(Tok::Bang); break;
      case '.': push(Tok::Dot); break;
      case '(': push(Tok::LParen); break;
      case ')': push(Tok::RParen); break;
      case '[': push(Tok::LBrack); break;
      case ']': push(Tok::RBrack); break;
      case ',': push(Tok::Comma); break;
      case ':': push(Tok::Colon); break;
      case '=': push(Tok::Eq); break;
      default: err(std::string("unexpected character '") + c + "'");
    }
    ++i; ++col;
  }
  Token end{Tok::End, "", ConstId::Bit0, 0, line, col};
  out.push_back(end);
  return out;
}

// ---- surface syntax --------------------------------------------------------

struct SNode;
using SPtr = std::shared_ptr<const SNode>;

enum class SKind {
  Var, Lam, BangLam, App, Const, Bang, Nat, Tuple, Cons,
  CaseList, CaseNat, LetVar, LetTuple, LetCons,
};

struct SNode {
  SKind kind;
  std::string name;                 // Var / binder
  ConstId cid = ConstId::Bit0;
  long nat = 0;
  std::vector<SPtr> kids;
  std::vector<std::string> names;   // extra binders (patterns)
  int line = 1, col = 1;
};

SPtr snode(SNode n) { return std::make_shared<const SNode>(std::move(n)); }

// ---- parsing ---------------------------------------------------------------

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;
  Calculus calc;

  const Token& peek() const { return toks[pos]; }
  Token next() { return toks[pos++]; }
  [[noreturn]] void fail(const std::string& msg) {
    throw SyntaxError(msg, peek().line, peek().col);
  }
  Token expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail("expected " + what);
    return next();
  }
  std::string ident(const std::string& what) {
    return expect(Tok::Ident, what).text;
  }
  void no_bang(const Token& t) {
    if (calc == Calculus::LambdaI)
      throw SyntaxError("'!' is not part of the lambda_i syntax", t.line, t.col);
  }

  SPtr term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Lambda:
      case Tok::BangLambda: {
        Token l = next();
        if (l.kind == Tok::BangLambda) no_bang(l);
        std::string x = ident("binder after lambda");
        expect(Tok::Dot, "'.' after binder");
        SPtr body = term();
        return snode({l.kind == Tok::Lambda ? SKind::Lam : SKind::BangLam, x,
                      ConstId::Bit0, 0, {body}, {}, l.line, l.col});
      }
      case Tok::KwLet: return let_term();
      case Tok::KwCase: return case_term();
      default: return cons_expr();
    }
  }

  SPtr let_term() {
    Token kw = next();
    SKind kind;
    std::vector<std::string> names;
    if (peek().kind == Tok::LParen) {
      next();
      names.push_back(ident("pattern variable"));
      while (peek().kind == Tok::Comma) {
        next();
        names.push_back(ident("pattern variable"));
      }
      expect(Tok::RParen, "')' closing let pattern");
      kind = names.size() == 1 ? SKind::LetVar : SKind::LetTuple;
    } else {
      names.push_back(ident("let binder"));
      if (peek().kind == Tok::Colon) {
        next();
        names.push_back(ident("tail variable"));
        kind = SKind::LetCons;
      } else {
        kind = SKind::LetVar;
      }
    }
    std::set<std::string> uniq(names.begin(), names.end());
    if (uniq.size() != names.size())
      throw SyntaxError("duplicate variable in let pattern", kw.line, kw.col);
    expect(Tok::Eq, "'=' in let");
    SPtr rhs = term();
    expect(Tok::KwIn, "'in'");
    SPtr body = term();
    return snode({kind, names[0], ConstId::Bit0, 0, {rhs, body}, names,
                  kw.line, kw.col});
  }

  SPtr case_term() {
    Token kw = next();
    SPtr scrut = term();
    expect(Tok::KwOf, "'of'");
    expect(Tok::LParen, "'(' opening case alternatives");
    SKind kind;
    std::vector<std::string> names;
    if (peek().kind == Tok::KwEmpty) {
      next();
      kind = SKind::CaseList;
    } else if (peek().kind == Tok::Const && peek().cid == ConstId::Bit0) {
      next();
      kind = SKind::CaseNat;
    } else {
      fail("case alternatives must start with 'empty ->' or '0 ->'");
    }
    expect(Tok::Arrow, "'->'");
    SPtr base = term();
    expect(Tok::Comma, "',' between case alternatives");
    if (kind == SKind::CaseList) {
      names.push_back(ident("head variable"));
      expect(Tok::Colon, "':' in cons pattern");
      names.push_back(ident("tail variable"));
      if (names[0] == names[1])
        throw SyntaxError("duplicate variable in cons pattern", kw.line, kw.col);
    } else {
      expect(Tok::KwSuc, "'suc'");
      names.push_back(ident("predecessor variable"));
    }
    expect(Tok::Arrow, "'->'");
    SPtr step = term();
    expect(Tok::RParen, "')' closing case");
    return snode({kind, "", ConstId::Bit0, 0, {scrut, base, step}, names,
                  kw.line, kw.col});
  }

  SPtr cons_expr() {
    SPtr head = app_expr();
    if (peek().kind == Tok::Colon) {
      Token t = next();
      SPtr tail = cons_expr();
      return snode({SKind::Cons, "", ConstId::Bit0, 0, {head, tail}, {},
                    t.line, t.col});
    }
    return head;
  }

  bool starts_atom() const {
    switch (peek().kind) {
      case Tok::Ident: case Tok::Const: case Tok::Nat:
      case Tok::Bang: case Tok::LParen: case Tok::LBrack:
      case Tok::KwEmpty: case Tok::KwSuc:
        return true;
      default: return false;
    }
  }

  SPtr app_expr() {
    SPtr cur = atom();
    while (starts_atom()) {
      SPtr arg = atom();
      cur = snode({SKind::App, "", ConstId::Bit0, 0, {cur, arg}, {},
                   cur->line, cur->col});
    }
    return cur;
  }

  SPtr atom() {
    Token t = peek();
    switch (t.kind) {
      case Tok::Ident:
        next();
        return snode({SKind::Var, t.text, ConstId::Bit0, 0, {}, {}, t.line, t.col});
      // "empty" and "suc" double as prelude combinators outside patterns.
      case Tok::KwEmpty:
      case Tok::KwSuc:
        next();
        return snode({SKind::Var, t.kind == Tok::KwEmpty ? "empty" : "suc",
                      ConstId::Bit0, 0, {}, {}, t.line, t.col});
      case Tok::Const:
        next();
        return snode({SKind::Const, "", t.cid, 0, {}, {}, t.line, t.col});
      case Tok::Nat:
        next();
        return snode({SKind::Nat, "", ConstId::Bit0, t.nat, {}, {}, t.line, t.col});
      case Tok::Bang: {
        next();
        no_bang(t);
        SPtr inner = atom();
        return snode({SKind::Bang, "", ConstId::Bit0, 0, {inner}, {}, t.line, t.col});
      }
      case Tok::LParen: {
        next();
        std::vector<SPtr> elems{term()};
        while (peek().kind == Tok::Comma) {
          next();
          elems.push_back(term());
        }
        expect(Tok::RParen, "')'");
        if (elems.size() == 1) return elems[0];
        return snode({SKind::Tuple, "", ConstId::Bit0, 0, elems, {}, t.line, t.col});
      }
      case Tok::LBrack: {
        next();
        std::vector<SPtr> elems;
        if (peek().kind != Tok::RBrack) {
          elems.push_back(term());
          while (peek().kind == Tok::Comma) {
            next();
            elems.push_back(term());
          }
        }
        expect(Tok::RBrack, "']'");
        return snode({SKind::Tuple, "", ConstId::Bit0, 0, elems, {}, t.line, t.col});
      }
      default: fail("expected a term");
    }
  }
};

// ---- elaboration -----------------------------------------------------------

// Free surface variables in first-occurrence order.
void free_names(const SPtr& n, std::vector<std::string>& bound,
                std::vector<std::string>& out) {
  auto is_bound = [&](const std::string& x) {
    return std::find(bound.begin(), bound.end(), x) != bound.end();
  };
  switch (n->kind) {
    case SKind::Var:
      if (!is_bound(n->name) &&
          std::find(out.begin(), out.end(), n->name) == out.end())
        out.push_back(n->name);
      break;
    case SKind::Lam:
    case SKind::BangLam:
      bound.push_back(n->name);
      free_names(n->kids[0], bound, out);
      bound.pop_back();
      break;
    case SKind::App:
    case SKind::Cons:
    case SKind::Tuple:
    case SKind::Bang:
      for (auto& k : n->kids) free_names(k, bound, out);
      break;
    case SKind::CaseList:
    case SKind::CaseNat:
      free_names(n->kids[0], bound, out);
      free_names(n->kids[1], bound, out);
      for (auto& x : n->names) bound.push_back(x);
      free_names(n->kids[2], bound, out);
      for (size_t i = 0; i < n->names.size(); ++i) bound.pop_back();
      break;
    case SKind::LetVar:
    case SKind::LetTuple:
    case SKind::LetCons:
      free_names(n->kids[0], bound, out);
      for (auto& x : n->names) bound.push_back(x);
      free_names(n->kids[1], bound, out);
      for (size_t i = 0; i < n->names.size(); ++i) bound.pop_back();
      break;
    default: break;
  }
}

struct Elab {
  Calculus calc;
  const Env* env;
  std::vector<std::pair<std::string, bool>> scope;  // (name, linear)

  [[noreturn]] void fail(const SPtr& n, const std::string& msg) {
    throw SyntaxError(msg, n->line, n->col);
  }

  TermPtr resolve(const SPtr& n, const std::string& name) {
    for (int i = static_cast<int>(scope.size()) - 1; i >= 0; --i)
      if (scope[i].first == name)
        return var(static_cast<int>(scope.size()) - 1 - i, name);
    auto it = env->find(name);
    if (it != env->end()) return it->second;
    fail(n, "unbound variable '" + name + "'");
  }

  bool linear_in_scope(const std::string& name) const {
    for (int i = static_cast<int>(scope.size()) - 1; i >= 0; --i)
      if (scope[i].first == name) return scope[i].second;
    return false;  // prelude names are closed
  }

  // Linear scope variables occurring free in the case branches; these get
  // threaded outside the !-suspensions.
  std::vector<std::string> thread_vars(const SPtr& n) {
    std::vector<std::string> out, found;
    {
      std::vector<std::string> bound;
      free_names(n->kids[1], bound, found);
      bound = n->names;
      free_names(n->kids[2], bound, found);
    }
    for (auto& x : found)
      if (linear_in_scope(x)) out.push_back(x);
    return out;
  }

  TermPtr lam_chain(const std::vector<std::string>& names, TermPtr body) {
    for (auto it = names.rbegin(); it != names.rend(); ++it)
      body = lam(*it, std::move(body));
    return body;
  }

  TermPtr elab(const SPtr& n) {
    switch (n->kind) {
      case SKind::Var: return resolve(n, n->name);
      case SKind::Const: return cnst(n->cid);
      case SKind::Nat:
        return prelude::church_nat(calc, static_cast<int>(n->nat));
      case SKind::Bang: return bang(elab(n->kids[0]));
      case SKind::Lam:
      case SKind::BangLam: {
        bool linear = n->kind == SKind::Lam;
        scope.emplace_back(n->name, linear);
        TermPtr body = elab(n->kids[0]);
        scope.pop_back();
        return linear ? lam(n->name, body) : bang_lam(n->name, body);
      }
      case SKind::App: return app(elab(n->kids[0]), elab(n->kids[1]));
      case SKind::Cons:
        return app(app(prelude::list_cons(calc), elab(n->kids[0])),
                   elab(n->kids[1]));
      case SKind::Tuple: {
        TermPtr t = prelude::list_empty(calc);
        for (auto it = n->kids.rbegin(); it != n->kids.rend(); ++it)
          t = app(app(prelude::list_cons(calc), elab(*it)), t);
        return t;
      }
      case SKind::CaseList:
      case SKind::CaseNat: return elab_case(n);
      case SKind::LetVar: {
        TermPtr rhs = elab(n->kids[0]);
        scope.emplace_back(n->names[0], true);
        TermPtr body = elab(n->kids[1]);
        scope.pop_back();
        return app(lam(n->names[0], body), rhs);
      }
      case SKind::LetTuple: {
        TermPtr rhs = elab(n->kids[0]);
        for (auto& x : n->names) scope.emplace_back(x, true);
        TermPtr body = elab(n->kids[1]);
        for (size_t i = 0; i < n->names.size(); ++i) scope.pop_back();
        TermPtr k = lam_chain(n->names, body);
        if (calc == Calculus::LambdaQ)
          return app(app(prelude::uncons(static_cast<int>(n->names.size())), rhs), k);
        return classical_split(rhs, n->names, k, /*open_tail=*/false);
      }
      case SKind::LetCons: {
        TermPtr rhs = elab(n->kids[0]);
        for (auto& x : n->names) scope.emplace_back(x, true);
        TermPtr body = elab(n->kids[1]);
        for (size_t i = 0; i < n->names.size(); ++i) scope.pop_back();
        TermPtr k = lam_chain(n->names, body);
        if (calc == Calculus::LambdaQ)
          return app(app(prelude::uncons_cons(), rhs), k);
        return classical_split(rhs, n->names, k, /*open_tail=*/true);
      }
    }
    fail(n, "internal: unhandled surface node");
  }

  // Classical tuple/cons destructuring per the nested-case display:
  // (\u. case u of (empty -> empty, x1:t -> ...)) rhs, unused tails allowed.
  TermPtr classical_split(TermPtr rhs, const std::vector<std::string>& names,
                          TermPtr k, bool open_tail) {
    // Build case chain applied to k: k x1 x2 ... xn (tail dropped), using
    // raw de Bruijn. For open_tail, k receives head and tail.
    // case u of alts ==> u (\z.empty) (\h.\t. body)
    TermPtr emp = prelude::list_empty(calc);
    if (open_tail) {
      // u (\z.empty) k   with k = \h.\t. ...
      return app(lam("u", app(app(var(0), lam("z", shift(emp, 2))),
                              shift(k, 1))),
                 rhs);
    }
    // innermost body: k applied to the collected heads.
    // Scope inside the chain at depth i (1-based heads h1..hi, tails t1..ti):
    // after i levels the binders are: u, h1, t1, h2, t2, ..., hi, ti.
    size_t nn = names.size();
    // Build from the inside out.
    // Innermost: k h1 ... hn ; index of h_j at depth (1 + 2*nn):
    // h_j was bound at position 2*j - 1 (after u at 0), so its de Bruijn
    // index from the innermost point is 2*nn - (2*j - 1).
    TermPtr body = shift(k, static_cast<int>(1 + 2 * nn));
    for (size_t j = 1; j <= nn; ++j)
      body = app(body, var(static_cast<int>(2 * nn - (2 * j - 1))));
    for (size_t i = nn; i >= 1; --i) {
      // case t_{i-1} of (empty -> empty, h_i : t_i -> body)
      // scrutinee: u for i==1 else t_{i-1}; at the point of this case the
      // binders in scope are u, h1, t1, ..., h_{i-1}, t_{i-1}.
      int scrut_index = 0;  // t_{i-1} or u is always the innermost binder
      TermPtr alt2 = lam(names[i - 1], lam("t" + std::to_string(i), body));
      TermPtr alt1 = lam("z", shift(emp, static_cast<int>(2 * i)));
      body = app(app(var(scrut_index), alt1), alt2);
    }
    return app(lam("u", body), rhs);
  }

  TermPtr elab_case(const SPtr& n) {
    bool is_list = n->kind == SKind::CaseList;
    TermPtr scrut = elab(n->kids[0]);
    if (calc == Calculus::LambdaI) {
      scope.emplace_back("$z", false);
      TermPtr base = elab(n->kids[1]);
      scope.pop_back();
      TermPtr alt1 = lam("z", base);
      TermPtr alt2;
      if (is_list) {
        scope.emplace_back(n->names[0], true);
        scope.emplace_back(n->names[1], true);
        TermPtr step = elab(n->kids[2]);
        scope.pop_back();
        scope.pop_back();
        alt2 = lam(n->names[0], lam(n->names[1], step));
      } else {
        scope.emplace_back(n->names[0], true);
        TermPtr step = elab(n->kids[2]);
        scope.pop_back();
        alt2 = lam(n->names[0], step);
      }
      return app(app(scrut, alt1), alt2);
    }
    // LambdaQ: E1 !(\!z. \v... base) !(\pat... \v... step) v...
    std::vector<std::string> threaded = thread_vars(n);
    scope.emplace_back("$z", false);
    for (auto& v : threaded) scope.emplace_back(v, true);
    TermPtr base = elab(n->kids[1]);
    for (size_t i = 0; i < threaded.size(); ++i) scope.pop_back();
    scope.pop_back();
    TermPtr alt1 = bang(bang_lam("z", lam_chain(threaded, base)));
    for (auto& x : n->names) scope.emplace_back(x, true);
    for (auto& v : threaded) scope.emplace_back(v, true);
    TermPtr step = elab(n->kids[2]);
    for (size_t i = 0; i < threaded.size() + n->names.size(); ++i)
      scope.pop_back();
    TermPtr inner = lam_chain(threaded, step);
    TermPtr alt2;
    if (is_list)
      alt2 = bang(lam(n->names[0], lam(n->names[1], inner)));
    else
      alt2 = bang(lam(n->names[0], inner));
    TermPtr res = app(app(scrut, alt1), alt2);
    for (auto& v : threaded) {
      SPtr ref = snode({SKind::Var, v, ConstId::Bit0, 0, {}, {}, n->line, n->col});
      res = app(res, elab(ref));
    }
    return res;
  }
};

}  // namespace

TermPtr parse(const std::string& source, Calculus calc, const Env& env) {
  Parser p{lex(source), 0, calc};
  SPtr s = p.term();
  if (p.peek().kind != Tok::End) p.fail("trailing input after term");
  Elab e{calc, &env, {}};
  return e.elab(s);
}

TermPtr parse(const std::string& source, Calculus calc) {
  static const Env empty;
  return parse(source, calc, empty);
}

}  // namespace qlam
