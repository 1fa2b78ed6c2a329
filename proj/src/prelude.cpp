#include "qlam/prelude.hpp"

#include <map>

namespace qlam::prelude {

namespace {

bool is_abs(const TermPtr& t) {
  return t->kind == TermKind::Lam || t->kind == TermKind::BangLam;
}

}  // namespace

TermPtr id_term() {
  static const TermPtr t = lam("w", var(0, "w"));
  return t;
}

TermPtr church_zero(Calculus c) {
  if (c == Calculus::LambdaQ) {
    static const TermPtr q =
        bang_lam("x", bang_lam("y", app(var(1, "x"), bang(id_term()))));
    return q;
  }
  static const TermPtr i =
      lam("x", lam("y", app(var(1, "x"), id_term())));
  return i;
}

TermPtr church_suc(Calculus c) {
  // \n. \x. \y. (y n), with nonlinear x/y in the linear calculus.
  if (c == Calculus::LambdaQ) {
    static const TermPtr q = lam(
        "n", bang_lam("x", bang_lam("y", app(var(0, "y"), var(2, "n")))));
    return q;
  }
  static const TermPtr i =
      lam("n", lam("x", lam("y", app(var(0, "y"), var(2, "n")))));
  return i;
}

TermPtr church_nat(Calculus c, int n) {
  if (n < 0) throw Error("negative numeral");
  TermPtr v = church_zero(c);
  for (int k = 0; k < n; ++k) {
    // Successor in value form: \x.\y.(y v).
    TermPtr body = app(var(0, "y"), shift(v, 2));
    v = c == Calculus::LambdaQ ? bang_lam("x", bang_lam("y", body))
                               : lam("x", lam("y", body));
  }
  return v;
}

std::optional<int> decode_nat(Calculus c, const TermPtr& value) {
  (void)c;
  int n = 0;
  TermPtr cur = value;
  for (;;) {
    if (!is_abs(cur) || !is_abs(cur->a)) return std::nullopt;
    const TermPtr& body = cur->a->a;
    if (body->kind != TermKind::App || body->a->kind != TermKind::Var)
      return std::nullopt;
    if (body->a->index == 1) return n;  // (x ...) = zero
    if (body->a->index != 0) return std::nullopt;
    n += 1;
    cur = body->b;  // (y m): closed predecessor value
  }
}

TermPtr list_empty(Calculus c) { return church_zero(c); }

TermPtr list_cons(Calculus c) {
  // \h. \t. \x. \y. ((y h) t)
  if (c == Calculus::LambdaQ) {
    static const TermPtr q =
        lam("h", lam("t", bang_lam("x", bang_lam("y",
            app(app(var(0, "y"), var(3, "h")), var(2, "t"))))));
    return q;
  }
  static const TermPtr i =
      lam("h", lam("t", lam("x", lam("y",
          app(app(var(0, "y"), var(3, "h")), var(2, "t"))))));
  return i;
}

TermPtr tuple_of(Calculus c, const std::vector<TermPtr>& elems) {
  TermPtr t = list_empty(c);
  for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
    TermPtr body = app(app(var(0, "y"), shift(*it, 2)), shift(t, 2));
    t = c == Calculus::LambdaQ ? bang_lam("x", bang_lam("y", body))
                               : lam("x", lam("y", body));
  }
  return t;
}

// ---- tuple splitters -------------------------------------------------------

namespace {

// (uncons n) l k  -->*  k x1 ... xn. Each layer opens one cons cell via a
// continuation pair; the final empty tail is consumed linearly.
std::string split_src(const std::string& e, int i, int n) {
  if (i <= n) {
    std::string h = "h" + std::to_string(i);
    std::string t = "t" + std::to_string(i);
    return "((" + e + " !(\\!z. \\w. w)) !(\\a. \\b. \\w. ((w a) b))) (\\" + h +
           ". \\" + t + ". " + split_src(t, i + 1, n) + ")";
  }
  std::string chain = "k";
  for (int j = 1; j <= n; ++j) chain = "(" + chain + " h" + std::to_string(j) + ")";
  return "((" + e + " !(\\!z. \\u. u)) !(\\a. \\b. \\u. ((u a) b))) " + chain;
}

}  // namespace

TermPtr uncons(int n) {
  if (n < 1) throw Error("uncons needs at least one component");
  static std::map<int, TermPtr> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  TermPtr t = parse("\\l. \\k. " + split_src("l", 1, n), Calculus::LambdaQ);
  cache.emplace(n, t);
  return t;
}

TermPtr uncons_cons() {
  static const TermPtr t = parse(
      "\\l. \\k. ((l !(\\!z. \\w. w)) !(\\a. \\b. \\w. ((w a) b))) k",
      Calculus::LambdaQ);
  return t;
}

// ---- recursion -------------------------------------------------------------

TermPtr fix_term() {
  static const TermPtr t = [] {
    const std::string g = "\\!u. \\!f. (f !((u !u) !f))";
    return parse("((" + g + ") !(" + g + "))", Calculus::LambdaQ);
  }();
  return t;
}

// ---- standard environments ---------------------------------------------------

namespace {

Env build_env(Calculus c) {
  Env e;
  e["id"] = id_term();
  e["suc"] = church_suc(c);
  e["empty"] = list_empty(c);
  auto define = [&](const std::string& name, const std::string& src) {
    e[name] = parse(src, c, e);
  };
  if (c == Calculus::LambdaI) {
    // CBV fixed point (eta-protected self-application).
    define("zfix",
           "\\f. ((\\x. (f (\\v. ((x x) v)))) (\\x. (f (\\v. ((x x) v)))))");
    define("pred", "\\m. case m of (0 -> 0n, suc k -> k)");
    define("add",
           "zfix (\\f. \\m. \\n. "
           "(case m of (0 -> id, suc k -> \\u. ((f k) (suc u)))) n)");
    define("double",
           "zfix (\\d. \\m. case m of (0 -> 0n, suc k -> (suc (suc (d k)))))");
    define("map",
           "zfix (\\m. \\f. \\list. "
           "case list of (empty -> [], h : t -> ((f h) : ((m f) t))))");
    return e;
  }
  e["fix"] = fix_term();
  define("pred", "\\m. case m of (0 -> 0n, suc k -> k)");
  define("add",
         "fix !(\\!f. \\m. \\n. "
         "(case m of (0 -> id, suc k -> \\u. ((f k) (suc u)))) n)");
  define("double",
         "fix !(\\!d. \\m. case m of (0 -> 0n, suc k -> (suc (suc (d k)))))");
  define("map",
         "fix !(\\!m. \\!f. \\list. "
         "case list of (empty -> [], h : t -> ((f h) : ((m !f) t))))");
  define("append",
         "fix !(\\!a. \\x. \\y. "
         "(case x of (empty -> id, h : t -> \\u. (h : ((a t) u)))) y)");
  define("reverse",
         "fix !(\\!r. \\list. "
         "case list of (empty -> [], h : t -> ((append (r t)) [h])))");
  define("hadamards",
         "fix !(\\!hs. \\list. "
         "case list of (empty -> [], x : t -> ((H x) : (hs t))))");
  // Derived and algorithmic gates.
  e["cX"] = cnst(ConstId::Cnot);
  define("cZ",
         "\\p. let (x, y) = p in "
         "(let (x2, y2) = (cnot (x, (H y))) in (x2, (H y2)))");
  define("epr", "(cnot ((H 0), 0))");
  define("alice",
         "\\p. let (x, e) = p in "
         "(let (x2, e2) = (cnot (x, e)) in ((H x2), e2))");
  define("bob",
         "\\p. let (x, y, e) = p in "
         "(let (y2, e2) = (cX (y, e)) in "
         "(let (x2, e3) = (cZ (x, e2)) in (x2, y2, e3)))");
  define("teleport",
         "\\q. let (e1, e2) = epr in "
         "(let (a, b) = (alice (q, e1)) in (bob (a, b, e2)))");
  define("deutsch",
         "\\u. let (x, y) = (u ((H 0), (H 1))) in ((H x), y)");
  define("phases",
         "fix !(\\!p. \\target. \\list. \\!n. case list of ("
         "empty -> [target], "
         "c : rest -> let (t2, c2) = ((cphase !n) (target, c)) in "
         "(let t3 : r = (((p t2) rest) !(suc n)) in (t3 : (c2 : r)))))");
  define("fourier'",
         "fix !(\\!f. \\list. case list of ("
         "empty -> [], "
         "h : t -> let h2 : t2 = (((phases (H h)) t) !2n) in (h2 : (f t2))))");
  define("fourier", "\\list. (reverse (fourier' list))");
  return e;
}

}  // namespace

const Env& env(Calculus c) {
  static const Env qenv = build_env(Calculus::LambdaQ);
  static const Env ienv = build_env(Calculus::LambdaI);
  return c == Calculus::LambdaQ ? qenv : ienv;
}

TermPtr parse_program(const std::string& source, Calculus c) {
  return parse(source, c, env(c));
}

// ---- named combinators -------------------------------------------------------

namespace {

TermPtr from_env(Calculus c, const std::string& name) {
  return env(c).at(name);
}

}  // namespace

TermPtr church_pred(Calculus c) { return from_env(c, "pred"); }
TermPtr add_term(Calculus c) { return from_env(c, "add"); }
TermPtr double_term(Calculus c) { return from_env(c, "double"); }
TermPtr map_term(Calculus c) { return from_env(c, "map"); }
TermPtr append_term() { return from_env(Calculus::LambdaQ, "append"); }
TermPtr reverse_term() { return from_env(Calculus::LambdaQ, "reverse"); }

TermPtr add_selfapp() {
  static const TermPtr t = [] {
    const std::string body =
        "\\!f. \\m. \\n. "
        "(case m of (0 -> id, suc k -> \\u. (((f !f) k) (suc u)))) n";
    Env e;
    e["id"] = id_term();
    e["suc"] = church_suc(Calculus::LambdaQ);
    return parse("((" + body + ") !(" + body + "))", Calculus::LambdaQ, e);
  }();
  return t;
}

TermPtr naive_append_term() {
  // The textbook recursion with the second list referenced inside both
  // suspended branches: deliberately ill-formed in the linear calculus.
  static const TermPtr t = [] {
    Env e;
    e["fix"] = fix_term();
    return parse(
        "fix !(\\!a. \\x. \\y. "
        "((x !(\\!z. y)) !(\\h. \\t. (h : ((a t) y)))))",
        Calculus::LambdaQ, e);
  }();
  return t;
}

TermPtr embed_classical(const TermPtr& classical) {
  switch (classical->kind) {
    case TermKind::Var:
      return bang(var(classical->index, classical->hint));
    case TermKind::Lam:
      return bang(bang_lam(classical->hint, embed_classical(classical->a)));
    case TermKind::App: {
      // (t1 t2)* = (((\!z. z) t1*) t2*): force the suspension, then apply.
      TermPtr force = bang_lam("z", var(0, "z"));
      return app(app(force, embed_classical(classical->a)),
                 embed_classical(classical->b));
    }
    case TermKind::Const:
      return bang(cnst(classical->cid));
    default:
      throw Error("embedding is defined on pure classical terms only");
  }
}

}  // namespace qlam::prelude
