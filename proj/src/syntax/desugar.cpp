#include "pgfcheck/syntax/desugar.hpp"

#include <algorithm>
#include <optional>

namespace pgfcheck::syntax {

namespace {

struct Interval {
  std::string var;
  std::uint32_t lo = 0;
  std::optional<std::uint32_t> hi;  // exclusive; nullopt = unbounded
};

Interval atom_interval(const Guard& a) {
  Interval iv{a.var, 0, std::nullopt};
  switch (a.rel) {
    case Rel::Lt: iv.hi = a.n; break;
    case Rel::Le: iv.hi = a.n + 1; break;
    case Rel::Eq: iv.lo = a.n; iv.hi = a.n + 1; break;
    case Rel::Gt: iv.lo = a.n + 1; break;
    case Rel::Ge: iv.lo = a.n; break;
  }
  return iv;
}

Stmt less_than(const std::string& x, std::uint32_t n, Stmt yes, Stmt no) {
  if (n == 0) return no;
  return Stmt::if_else(Guard::atom(x, Rel::Lt, n), std::move(yes), std::move(no));
}

Stmt emit_interval(const Interval& iv, const Stmt& inside, const Stmt& outside) {
  if (iv.hi && iv.lo >= *iv.hi) return outside;
  if (!iv.hi) return iv.lo == 0 ? inside : less_than(iv.var, iv.lo, outside, inside);
  if (iv.lo == 0) return less_than(iv.var, *iv.hi, inside, outside);
  return less_than(iv.var, *iv.hi, less_than(iv.var, iv.lo, outside, inside), outside);
}

void flatten_and(const Guard& g, std::vector<const Guard*>& out) {
  if (g.kind == Guard::Kind::And) {
    for (const auto& a : g.args) flatten_and(a, out);
  } else {
    out.push_back(&g);
  }
}

class Desugarer {
 public:
  Desugarer(Program& prog, const DesugarOptions& opts) : prog_(prog), opts_(opts) {}

  Stmt run(const Stmt& s) {
    std::vector<Stmt> out;
    emit(s, out);
    return Stmt::seq(std::move(out));
  }

 private:
  std::string fresh() {
    std::string name = "_t" + std::to_string(prog_.temps.size());
    if (prog_.declares_var(name) || prog_.declares_param(name)) {
      throw Error(ErrorKind::FreshVariableClash, "temporary '" + name + "' is already declared");
    }
    prog_.temps.push_back(name);
    return name;
  }

  static void push(std::vector<Stmt>& out, Stmt s) {
    if (s.kind == StmtKind::Skip) return;
    if (s.kind == StmtKind::Seq) {
      for (auto& k : s.kids) out.push_back(std::move(k));
      return;
    }
    out.push_back(std::move(s));
  }

  // x += iid(dirac(n), t) with t temporarily 1
  void add_const(const std::string& x, std::uint32_t n, std::vector<Stmt>& out) {
    if (n == 0) return;
    std::string t = fresh();
    out.push_back(Stmt::assign_const(t, 1));
    out.push_back(Stmt::iid_incr(x, Dist::dirac(n), t));
    out.push_back(Stmt::assign_const(t, 0));
  }

  void emit(const Stmt& s, std::vector<Stmt>& out) {
    switch (s.kind) {
      case StmtKind::Skip: return;
      case StmtKind::AssignConst:
      case StmtKind::Decr:
      case StmtKind::IidIncr:
      case StmtKind::SubVar: {
        Stmt c = s;
        c.loc = {};
        out.push_back(std::move(c));
        return;
      }
      case StmtKind::AssignVar:
        out.push_back(Stmt::assign_const(s.x, 0));
        out.push_back(Stmt::iid_incr(s.x, Dist::dirac(1), s.y));
        return;
      case StmtKind::IncrVar: out.push_back(Stmt::iid_incr(s.x, Dist::dirac(1), s.y)); return;
      case StmtKind::IncrConst: add_const(s.x, s.n, out); return;
      case StmtKind::AssignDist:
      case StmtKind::IncrDist: {
        std::string t = fresh();
        out.push_back(Stmt::assign_const(t, 1));
        if (s.kind == StmtKind::AssignDist) out.push_back(Stmt::assign_const(s.x, 0));
        out.push_back(Stmt::iid_incr(s.x, s.dist, t));
        out.push_back(Stmt::assign_const(t, 0));
        return;
      }
      case StmtKind::AssignIid:
        out.push_back(Stmt::assign_const(s.x, 0));
        out.push_back(Stmt::iid_incr(s.x, s.dist, s.y, s.n));
        return;
      case StmtKind::Affine: affine(s, out); return;
      case StmtKind::IfElse:
        push(out, compile_guard(s.guard, run(s.kids[0]), run(s.kids[1])));
        return;
      case StmtKind::Seq:
        for (const auto& k : s.kids) emit(k, out);
        return;
      case StmtKind::While: {
        Stmt w = Stmt::while_loop(s.guard, run(s.kids[0]));
        if (s.invariant) w.invariant = std::make_shared<const Stmt>(run(*s.invariant));
        w.loc = s.loc;
        out.push_back(std::move(w));
        return;
      }
      case StmtKind::PChoice: {
        Stmt left = run(s.kids[0]);
        Stmt right = run(s.kids[1]);
        if (!opts_.pchoice_via_temp) {
          out.push_back(Stmt::pchoice(s.prob, std::move(left), std::move(right)));
          return;
        }
        // t := bernoulli(p); if (t < 1) {Q} else {P}; t := 0
        std::string t = fresh();
        Stmt coin;
        coin.kind = StmtKind::AssignDist;
        coin.x = t;
        coin.dist.kind = Dist::Kind::Bernoulli;
        coin.dist.p = s.prob;
        emit(coin, out);
        push(out, less_than(t, 1, std::move(right), std::move(left)));
        out.push_back(Stmt::assign_const(t, 0));
        return;
      }
      case StmtKind::Switch: {
        Stmt chain = run(s.kids.back());
        for (std::size_t i = s.labels.size(); i-- > 0;) {
          chain = compile_guard(Guard::atom(s.x, Rel::Eq, s.labels[i]), run(s.kids[i]), chain);
        }
        push(out, std::move(chain));
        return;
      }
      case StmtKind::Repeat: {
        Stmt body = run(s.kids[0]);
        for (std::uint32_t i = 0; i < s.n; ++i) push(out, body);
        return;
      }
    }
  }

  // x := sum_y a_y y + c: copy x if it is read with a coefficient other
  // than 1, add positive terms, subtract negative ones exactly, then apply
  // a negative constant as monus.
  void affine(const Stmt& s, std::vector<Stmt>& out) {
    const std::string& x = s.x;
    std::vector<std::pair<std::string, long>> terms;
    long self = 0;
    for (const auto& [v, k] : s.affine.coef) {
      if (v == x) self = k;
      else terms.emplace_back(v, k);
    }
    std::optional<std::string> copy;
    if (self != 1) {
      if (self != 0) {
        copy = fresh();
        out.push_back(Stmt::assign_const(*copy, 0));
        out.push_back(Stmt::iid_incr(*copy, Dist::dirac(1), x));
        terms.emplace_back(*copy, self);
      }
      out.push_back(Stmt::assign_const(x, 0));
    }
    for (const auto& [v, k] : terms) {
      if (k > 0) out.push_back(Stmt::iid_incr(x, Dist::dirac(static_cast<std::uint32_t>(k)), v));
    }
    if (s.affine.constant > 0) add_const(x, static_cast<std::uint32_t>(s.affine.constant), out);
    for (const auto& [v, k] : terms) {
      if (k < 0) out.push_back(Stmt::sub_var(x, v, static_cast<std::uint32_t>(-k)));
    }
    if (s.affine.constant < 0) out.push_back(Stmt::decr(x, static_cast<std::uint32_t>(-s.affine.constant)));
    if (copy) out.push_back(Stmt::assign_const(*copy, 0));
  }

  Program& prog_;
  const DesugarOptions& opts_;
};

}  // namespace

Stmt compile_guard(const Guard& g, const Stmt& then_branch, const Stmt& else_branch) {
  switch (g.kind) {
    case Guard::Kind::True: return then_branch;
    case Guard::Kind::False: return else_branch;
    case Guard::Kind::Atom: return emit_interval(atom_interval(g), then_branch, else_branch);
    case Guard::Kind::Not: return compile_guard(g.args[0], else_branch, then_branch);
    case Guard::Kind::Or:
      return compile_guard(g.args[0], then_branch, compile_guard(g.args[1], then_branch, else_branch));
    case Guard::Kind::And: {
      std::vector<const Guard*> conjuncts;
      flatten_and(g, conjuncts);
      std::vector<Interval> intervals;
      std::vector<const Guard*> rest;
      for (const Guard* c : conjuncts) {
        if (c->kind == Guard::Kind::False) return else_branch;
        if (c->kind == Guard::Kind::True) continue;
        if (c->kind != Guard::Kind::Atom) {
          rest.push_back(c);
          continue;
        }
        Interval iv = atom_interval(*c);
        auto it = std::find_if(intervals.begin(), intervals.end(), [&](const Interval& o) { return o.var == iv.var; });
        if (it == intervals.end()) {
          intervals.push_back(iv);
        } else {
          it->lo = std::max(it->lo, iv.lo);
          if (iv.hi) it->hi = it->hi ? std::min(*it->hi, *iv.hi) : *iv.hi;
        }
      }
      Stmt inner = then_branch;
      for (auto it = rest.rbegin(); it != rest.rend(); ++it) inner = compile_guard(**it, inner, else_branch);
      for (auto it = intervals.rbegin(); it != intervals.rend(); ++it) inner = emit_interval(*it, inner, else_branch);
      return inner;
    }
  }
  return else_branch;
}

Stmt desugar_stmt(const Stmt& s, Program& prog, const DesugarOptions& opts) {
  return Desugarer(prog, opts).run(s);
}

Program desugar(const Program& p, const DesugarOptions& opts) {
  Program out = p;
  out.body = desugar_stmt(p.body, out, opts);
  if (p.spec) out.spec = desugar_stmt(*p.spec, out, opts);
  return out;
}

bool is_core(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Skip:
    case StmtKind::AssignConst:
    case StmtKind::Decr:
    case StmtKind::IidIncr:
    case StmtKind::SubVar:
      return true;
    case StmtKind::IfElse:
      if (s.guard.kind != Guard::Kind::Atom || s.guard.rel != Rel::Lt) return false;
      break;
    case StmtKind::Seq:
    case StmtKind::While:
    case StmtKind::PChoice:
      break;
    default:
      return false;
  }
  return std::all_of(s.kids.begin(), s.kids.end(), [](const Stmt& k) { return is_core(k); });
}

bool loop_free(const Stmt& s) {
  if (s.kind == StmtKind::While) return false;
  return std::all_of(s.kids.begin(), s.kids.end(), [](const Stmt& k) { return loop_free(k); });
}

bool loop_free(const Program& p) { return loop_free(p.body); }

}  // namespace pgfcheck::syntax
