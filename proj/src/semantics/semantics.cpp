#include "pgfcheck/semantics/semantics.hpp"

#include <stdexcept>

#include "pgfcheck/cas/fps.hpp"

namespace pgfcheck::semantics {

using cas::Coeff;
using cas::IndetKind;
using cas::Poly;
using syntax::Dist;
using syntax::Guard;
using syntax::ParamExpr;
using syntax::Rel;
using syntax::Stmt;
using syntax::StmtKind;

Indet var_indet(const std::string& v) { return Indet::get(syntax::indet_name(v), IndetKind::Program); }

Indet meta_indet(const std::string& v) { return Indet::get("U_" + syntax::indet_name(v), IndetKind::Meta); }

Indet param_indet(const std::string& name) { return Indet::get(name, IndetKind::Parameter); }

Semantics::Semantics(const syntax::Program& p) : params_(p.params) {
  for (const auto& v : p.all_vars()) varmap_.emplace(v, var_indet(v));
}

Indet Semantics::indet(const std::string& var) const {
  auto it = varmap_.find(var);
  if (it == varmap_.end()) throw Error(ErrorKind::UndeclaredVariable, "undeclared variable '" + var + "'");
  return it->second;
}

ClosedForm Semantics::probability(const ParamExpr& e) const {
  using K = ParamExpr::Kind;
  switch (e.kind) {
    case K::Num: return ClosedForm(e.value);
    case K::Param: return ClosedForm(Poly::indet(param_indet(e.name)));
    case K::Neg: return -probability(e.args[0]);
    case K::Add: return probability(e.args[0]) + probability(e.args[1]);
    case K::Sub: return probability(e.args[0]) - probability(e.args[1]);
    case K::Mul: return probability(e.args[0]) * probability(e.args[1]);
    case K::Div: {
      ClosedForm d = probability(e.args[1]);
      if (d.is_zero()) throw Error(ErrorKind::InvalidParameter, "probability divides by zero");
      return probability(e.args[0]) / d;
    }
  }
  return ClosedForm();
}

namespace {

Poly uniform_poly(Indet t, std::uint32_t lo, std::uint32_t hi) {
  Coeff w(1, hi - lo + 1);
  std::vector<Poly::Term> terms;
  for (std::uint32_t i = lo; i <= hi; ++i) terms.emplace_back(cas::ExpVec(t, i), w);
  return Poly::from_terms(std::move(terms));
}

ClosedForm power(const ClosedForm& f, std::uint32_t n) {
  ClosedForm out(1);
  for (std::uint32_t i = 0; i < n; ++i) out = out * f;
  return out;
}

}  // namespace

ClosedForm Semantics::dist_pgf(const Dist& d) const {
  Indet t = Indet::placeholder();
  ClosedForm T(Poly::indet(t));
  auto check = [](const ClosedForm& p, bool allow_one) {
    if (auto v = p.as_rational()) {
      if (*v < 0 || *v > 1 || (!allow_one && *v == 1)) {
        throw Error(ErrorKind::InvalidParameter, "probability " + cas::coeff_to_string(*v) + " out of range");
      }
    }
  };
  switch (d.kind) {
    case Dist::Kind::Dirac: return ClosedForm(Poly::indet(t, d.a));
    case Dist::Kind::Bernoulli: {
      ClosedForm p = probability(d.p);
      check(p, true);
      return ClosedForm(1) - p + p * T;
    }
    case Dist::Kind::Uniform:
      if (d.a == 0) throw Error(ErrorKind::InvalidParameter, "uniform(0) has empty support");
      return ClosedForm(uniform_poly(t, 0, d.a - 1));
    case Dist::Kind::UniformRange:
      if (d.a > d.b) throw Error(ErrorKind::InvalidParameter, "empty uniform range");
      return ClosedForm(uniform_poly(t, d.a, d.b));
    case Dist::Kind::Geometric: {
      ClosedForm p = probability(d.p);
      check(p, false);
      return (ClosedForm(1) - p) / (ClosedForm(1) - p * T);
    }
    case Dist::Kind::Binomial: {
      ClosedForm p = probability(d.p);
      check(p, true);
      return power(ClosedForm(1) - p + p * T, d.a);
    }
    case Dist::Kind::NBinomial: {
      ClosedForm p = probability(d.p);
      check(p, false);
      return power((ClosedForm(1) - p) / (ClosedForm(1) - p * T), d.a);
    }
  }
  return ClosedForm(1);
}

ClosedForm Semantics::filter(const ClosedForm& g, const Guard& guard) const {
  using K = Guard::Kind;
  switch (guard.kind) {
    case K::True: return g;
    case K::False: return ClosedForm();
    case K::Not: return g - filter(g, guard.args[0]);
    case K::And: return filter(filter(g, guard.args[0]), guard.args[1]);
    case K::Or: {
      ClosedForm first = filter(g, guard.args[0]);
      return first + filter(g - first, guard.args[1]);
    }
    case K::Atom: break;
  }
  if (g.is_zero()) return g;
  Indet x = indet(guard.var);
  switch (guard.rel) {
    case Rel::Lt: return cas::cf_truncate_below(g, x, guard.n);
    case Rel::Le: return cas::cf_truncate_below(g, x, guard.n + 1);
    case Rel::Eq: {
      ClosedForm c = cas::cf_coeff(g, x, guard.n);
      return c * ClosedForm(Poly::indet(x, guard.n));
    }
    case Rel::Gt: return g - cas::cf_truncate_below(g, x, guard.n + 1);
    case Rel::Ge: return g - cas::cf_truncate_below(g, x, guard.n);
  }
  return g;
}

ClosedForm Semantics::apply(const Stmt& s, const ClosedForm& g) const {
  switch (s.kind) {
    case StmtKind::Skip: return g;
    case StmtKind::AssignConst: {
      Indet x = indet(s.x);
      return cas::cf_eval_at(g, x, 1) * ClosedForm(Poly::indet(x, s.n));
    }
    case StmtKind::Decr: {
      Indet x = indet(s.x);
      ClosedForm cur = g;
      for (std::uint32_t i = 0; i < s.n; ++i) {
        ClosedForm at_zero = cas::cf_eval_at(cur, x, 0);
        cur = cas::cf_shift_down(cur - at_zero, x) + at_zero;
      }
      return cur;
    }
    case StmtKind::IidIncr: {
      if (s.x == s.y) {
        throw Error(ErrorKind::SameVariableIid, "iid source and target are both '" + s.x + "'", s.loc);
      }
      Indet x = indet(s.x);
      Indet y = indet(s.y);
      ClosedForm h = cas::cf_subst(dist_pgf(s.dist), Indet::placeholder(), ClosedForm(Poly::indet(x)));
      ClosedForm replacement = power(h, s.n) * ClosedForm(Poly::indet(y));
      return cas::cf_subst(g, y, replacement);
    }
    case StmtKind::SubVar:
      return cas::cf_subst_laurent(g, indet(s.y), indet(s.x), s.n);
    case StmtKind::IfElse: {
      ClosedForm yes = filter(g, s.guard);
      ClosedForm no = g - yes;
      return apply(s.kids[0], yes) + apply(s.kids[1], no);
    }
    case StmtKind::Seq: {
      ClosedForm cur = g;
      for (const auto& k : s.kids) cur = apply(k, cur);
      return cur;
    }
    case StmtKind::PChoice: {
      ClosedForm p = probability(s.prob);
      if (auto v = p.as_rational(); v && (*v < 0 || *v > 1)) {
        throw Error(ErrorKind::InvalidParameter, "choice probability out of range", s.loc);
      }
      return p * apply(s.kids[0], g) + (ClosedForm(1) - p) * apply(s.kids[1], g);
    }
    case StmtKind::While:
      throw Error(ErrorKind::NotLoopFree, "loops have no direct closed-form semantics; check them against an invariant",
                  s.loc);
    default:
      throw std::logic_error("surface statement reached the PGF transformer; desugar first");
  }
}

State Semantics::transform(const Stmt& s, const State& in) const {
  return State{apply(s, in.cf), in.varmap};
}

ClosedForm Semantics::unroll(const Stmt& loop, std::uint32_t k, const ClosedForm& g) const {
  if (loop.kind != StmtKind::While) throw std::logic_error("unroll expects a while loop");
  ClosedForm acc;
  ClosedForm cur = g;
  for (std::uint32_t i = 0;; ++i) {
    ClosedForm inside = filter(cur, loop.guard);
    acc = acc + (cur - inside);
    if (i == k) break;
    cur = apply(loop.kids[0], inside);
  }
  return acc;
}

}  // namespace pgfcheck::semantics
