#include "pgfcheck/syntax/ast.hpp"

#include <algorithm>
#include <cctype>

namespace pgfcheck::syntax {

ParamExpr ParamExpr::number(const Coeff& c) {
  ParamExpr e;
  e.kind = Kind::Num;
  e.value = c;
  return e;
}

ParamExpr ParamExpr::param(std::string name) {
  ParamExpr e;
  e.kind = Kind::Param;
  e.name = std::move(name);
  return e;
}

ParamExpr ParamExpr::binary(Kind k, ParamExpr a, ParamExpr b) {
  if (a.is_number() && b.is_number()) {
    switch (k) {
      case Kind::Add: return number(a.value + b.value);
      case Kind::Sub: return number(a.value - b.value);
      case Kind::Mul: return number(a.value * b.value);
      case Kind::Div:
        if (b.value == 0) throw Error(ErrorKind::InvalidParameter, "division by zero in probability");
        return number(a.value / b.value);
      default: break;
    }
  }
  ParamExpr e;
  e.kind = k;
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  return e;
}

ParamExpr ParamExpr::negate(ParamExpr a) {
  if (a.is_number()) return number(-a.value);
  ParamExpr e;
  e.kind = Kind::Neg;
  e.args.push_back(std::move(a));
  return e;
}

void ParamExpr::collect_params(std::vector<std::string>& out) const {
  if (kind == Kind::Param) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    return;
  }
  for (const auto& a : args) a.collect_params(out);
}

Guard Guard::truth(bool v) {
  Guard g;
  g.kind = v ? Kind::True : Kind::False;
  return g;
}

Guard Guard::atom(std::string var, Rel rel, std::uint32_t n) {
  Guard g;
  g.kind = Kind::Atom;
  g.var = std::move(var);
  g.rel = rel;
  g.n = n;
  return g;
}

Guard Guard::conj(Guard a, Guard b) {
  Guard g;
  g.kind = Kind::And;
  g.args = {std::move(a), std::move(b)};
  return g;
}

Guard Guard::disj(Guard a, Guard b) {
  Guard g;
  g.kind = Kind::Or;
  g.args = {std::move(a), std::move(b)};
  return g;
}

Guard Guard::negate(Guard a) {
  Guard g;
  g.kind = Kind::Not;
  g.args = {std::move(a)};
  return g;
}

void Guard::collect_vars(std::vector<std::string>& out) const {
  if (kind == Kind::Atom) {
    if (std::find(out.begin(), out.end(), var) == out.end()) out.push_back(var);
    return;
  }
  for (const auto& a : args) a.collect_vars(out);
}

Stmt Stmt::skip() { return Stmt{}; }

Stmt Stmt::assign_const(std::string x, std::uint32_t n) {
  Stmt s;
  s.kind = StmtKind::AssignConst;
  s.x = std::move(x);
  s.n = n;
  return s;
}

Stmt Stmt::decr(std::string x, std::uint32_t n) {
  Stmt s;
  s.kind = StmtKind::Decr;
  s.x = std::move(x);
  s.n = n;
  return s;
}

Stmt Stmt::iid_incr(std::string x, Dist d, std::string y, std::uint32_t mult) {
  Stmt s;
  s.kind = StmtKind::IidIncr;
  s.x = std::move(x);
  s.y = std::move(y);
  s.dist = std::move(d);
  s.n = mult;
  return s;
}

Stmt Stmt::sub_var(std::string x, std::string y, std::uint32_t mult) {
  Stmt s;
  s.kind = StmtKind::SubVar;
  s.x = std::move(x);
  s.y = std::move(y);
  s.n = mult;
  return s;
}

Stmt Stmt::if_else(Guard g, Stmt then_branch, Stmt else_branch) {
  Stmt s;
  s.kind = StmtKind::IfElse;
  s.guard = std::move(g);
  s.kids.push_back(std::move(then_branch));
  s.kids.push_back(std::move(else_branch));
  return s;
}

Stmt Stmt::seq(std::vector<Stmt> items) {
  if (items.empty()) return skip();
  if (items.size() == 1) return std::move(items.front());
  Stmt s;
  s.kind = StmtKind::Seq;
  s.kids = std::move(items);
  return s;
}

Stmt Stmt::while_loop(Guard g, Stmt body) {
  Stmt s;
  s.kind = StmtKind::While;
  s.guard = std::move(g);
  s.kids.push_back(std::move(body));
  return s;
}

Stmt Stmt::pchoice(ParamExpr p, Stmt left, Stmt right) {
  Stmt s;
  s.kind = StmtKind::PChoice;
  s.prob = std::move(p);
  s.kids.push_back(std::move(left));
  s.kids.push_back(std::move(right));
  return s;
}

bool Stmt::operator==(const Stmt& o) const {
  if (kind != o.kind || x != o.x || y != o.y || n != o.n || !(dist == o.dist) || !(affine == o.affine) ||
      !(guard == o.guard) || !(prob == o.prob) || kids != o.kids || labels != o.labels) {
    return false;
  }
  if (static_cast<bool>(invariant) != static_cast<bool>(o.invariant)) return false;
  return !invariant || *invariant == *o.invariant;
}

std::vector<std::string> Program::all_vars() const {
  std::vector<std::string> out = vars;
  out.insert(out.end(), locals.begin(), locals.end());
  out.insert(out.end(), temps.begin(), temps.end());
  return out;
}

bool Program::declares_var(const std::string& v) const {
  return std::find(vars.begin(), vars.end(), v) != vars.end() ||
         std::find(locals.begin(), locals.end(), v) != locals.end() ||
         std::find(temps.begin(), temps.end(), v) != temps.end();
}

bool Program::declares_param(const std::string& p) const {
  return std::find(params.begin(), params.end(), p) != params.end();
}

std::string indet_name(const std::string& v) {
  std::string out = v;
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace pgfcheck::syntax
