#include "pgfcheck/syntax/printer.hpp"

#include <sstream>

namespace pgfcheck::syntax {

namespace {

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 2, ' '); }

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i];
  return out;
}

std::string rel_text(Rel r) {
  switch (r) {
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Eq: return "=";
    case Rel::Gt: return ">";
    case Rel::Ge: return ">=";
  }
  return "?";
}

std::string scaled_var(std::uint32_t k, const std::string& v) {
  return k == 1 ? v : std::to_string(k) + "*" + v;
}

std::string affine_text(const Affine& f) {
  std::string out;
  auto emit = [&](long k, const std::string& body) {
    if (out.empty()) {
      out = (k < 0 ? "-" : "") + body;
    } else {
      out += (k < 0 ? " - " : " + ") + body;
    }
  };
  for (const auto& [v, k] : f.coef) emit(k, scaled_var(static_cast<std::uint32_t>(k < 0 ? -k : k), v));
  if (f.constant != 0 || out.empty()) emit(f.constant, std::to_string(f.constant < 0 ? -f.constant : f.constant));
  return out;
}

void print_list(std::ostringstream& os, const Stmt& s, int indent);

// A statement printed as a single item of a statement list.
void print_item(std::ostringstream& os, const Stmt& s, int indent) {
  if (s.kind == StmtKind::Seq) {
    os << pad(indent) << "{\n";
    print_list(os, s, indent + 1);
    os << "\n" << pad(indent) << "}";
    return;
  }
  os << print(s, indent);
}

void print_list(std::ostringstream& os, const Stmt& s, int indent) {
  if (s.kind != StmtKind::Seq) {
    print_item(os, s, indent);
    return;
  }
  for (std::size_t i = 0; i < s.kids.size(); ++i) {
    if (i) os << ";\n";
    print_item(os, s.kids[i], indent);
  }
}

std::string block(const Stmt& s, int indent) {
  std::ostringstream os;
  os << "{\n";
  print_list(os, s, indent + 1);
  os << "\n" << pad(indent) << "}";
  return os.str();
}

}  // namespace

namespace {

std::string print_arg(const ParamExpr& e) {
  if (e.is_number() && (e.value < 0 || e.value.get_den() != 1)) return "(" + print(e) + ")";
  return print(e);
}

}  // namespace

std::string print(const ParamExpr& e) {
  using K = ParamExpr::Kind;
  switch (e.kind) {
    case K::Num: return cas::coeff_to_string(e.value);
    case K::Param: return e.name;
    case K::Neg: return "(-" + print_arg(e.args[0]) + ")";
    case K::Add: return "(" + print_arg(e.args[0]) + " + " + print_arg(e.args[1]) + ")";
    case K::Sub: return "(" + print_arg(e.args[0]) + " - " + print_arg(e.args[1]) + ")";
    case K::Mul: return "(" + print_arg(e.args[0]) + " * " + print_arg(e.args[1]) + ")";
    case K::Div: return "(" + print_arg(e.args[0]) + " / " + print_arg(e.args[1]) + ")";
  }
  return "?";
}

std::string print(const Guard& g) {
  using K = Guard::Kind;
  switch (g.kind) {
    case K::True: return "true";
    case K::False: return "false";
    case K::Atom: return g.var + " " + rel_text(g.rel) + " " + std::to_string(g.n);
    case K::And: return "(" + print(g.args[0]) + " & " + print(g.args[1]) + ")";
    case K::Or: return "(" + print(g.args[0]) + " | " + print(g.args[1]) + ")";
    case K::Not: return "!(" + print(g.args[0]) + ")";
  }
  return "?";
}

std::string print(const Dist& d) {
  using K = Dist::Kind;
  switch (d.kind) {
    case K::Dirac: return "dirac(" + std::to_string(d.a) + ")";
    case K::Bernoulli: return "bernoulli(" + print(d.p) + ")";
    case K::Uniform: return "uniform(" + std::to_string(d.a) + ")";
    case K::UniformRange: return "unif(" + std::to_string(d.a) + ", " + std::to_string(d.b) + ")";
    case K::Geometric: return "geometric(" + print(d.p) + ")";
    case K::Binomial: return "binomial(" + print(d.p) + ", " + std::to_string(d.a) + ")";
    case K::NBinomial: return "nbinomial(" + print(d.p) + ", " + std::to_string(d.a) + ")";
  }
  return "?";
}

std::string print(const Stmt& s, int indent) {
  std::ostringstream os;
  os << pad(indent);
  switch (s.kind) {
    case StmtKind::Skip: os << "skip"; break;
    case StmtKind::AssignConst: os << s.x << " := " << s.n; break;
    case StmtKind::Decr: os << s.x << " := " << s.x << " - " << s.n; break;
    case StmtKind::IidIncr: os << s.x << " += iid(" << print(s.dist) << ", " << scaled_var(s.n, s.y) << ")"; break;
    case StmtKind::AssignIid: os << s.x << " := iid(" << print(s.dist) << ", " << scaled_var(s.n, s.y) << ")"; break;
    case StmtKind::SubVar: os << s.x << " := " << s.x << " - " << scaled_var(s.n, s.y); break;
    case StmtKind::AssignVar: os << s.x << " := " << s.y; break;
    case StmtKind::IncrVar: os << s.x << " += " << s.y; break;
    case StmtKind::IncrConst: os << s.x << " += " << s.n; break;
    case StmtKind::AssignDist: os << s.x << " := " << print(s.dist); break;
    case StmtKind::IncrDist: os << s.x << " += " << print(s.dist); break;
    case StmtKind::Affine: os << s.x << " := " << affine_text(s.affine); break;
    case StmtKind::IfElse:
      os << "if (" << print(s.guard) << ") " << block(s.kids[0], indent);
      if (s.kids[1].kind != StmtKind::Skip) os << " else " << block(s.kids[1], indent);
      break;
    case StmtKind::Seq: os << block(s, indent); break;
    case StmtKind::While:
      if (s.invariant) os << "@invariant " << block(*s.invariant, indent) << "\n" << pad(indent);
      os << "while (" << print(s.guard) << ") " << block(s.kids[0], indent);
      break;
    case StmtKind::PChoice:
      os << block(s.kids[0], indent) << " [" << print(s.prob) << "] " << block(s.kids[1], indent);
      break;
    case StmtKind::Switch: {
      os << "switch (" << s.x << ") {\n";
      for (std::size_t i = 0; i < s.labels.size(); ++i) {
        os << pad(indent + 1) << "case " << s.labels[i] << ":\n";
        print_list(os, s.kids[i], indent + 2);
        os << ";\n";
      }
      if (s.kids.back().kind != StmtKind::Skip) {
        os << pad(indent + 1) << "default:\n";
        print_list(os, s.kids.back(), indent + 2);
        os << "\n";
      }
      os << pad(indent) << "}";
      break;
    }
    case StmtKind::Repeat: os << "repeat " << s.n << " " << block(s.kids[0], indent); break;
  }
  return os.str();
}

std::string print(const Program& p) {
  std::ostringstream os;
  if (!p.params.empty()) os << "params " << join(p.params) << ";\n";
  if (!p.vars.empty()) os << "vars " << join(p.vars) << ";\n";
  if (!p.locals.empty()) os << "locals " << join(p.locals) << ";\n";
  os << "\n";
  std::ostringstream body;
  print_list(body, p.body, 0);
  os << body.str() << "\n";
  if (p.spec) {
    std::ostringstream spec;
    print_list(spec, *p.spec, 0);
    os << "#invariant\n" << spec.str() << "\n";
  }
  return os.str();
}

}  // namespace pgfcheck::syntax
