#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pgfcheck/cas/poly.hpp"
#include "pgfcheck/errors.hpp"

namespace pgfcheck::syntax {

using cas::Coeff;

/// Rational arithmetic over literals and parameter names, used for
/// probabilities such as "1/2" or "(1-a)*b/(a+b-a*b)".
struct ParamExpr {
  enum class Kind { Num, Param, Add, Sub, Mul, Div, Neg };

  Kind kind = Kind::Num;
  Coeff value;       // Num
  std::string name;  // Param
  std::vector<ParamExpr> args;

  static ParamExpr number(const Coeff& c);
  static ParamExpr param(std::string name);
  static ParamExpr binary(Kind k, ParamExpr a, ParamExpr b);
  static ParamExpr negate(ParamExpr a);

  bool is_number() const { return kind == Kind::Num; }
  /// Collects parameter names in order of first occurrence.
  void collect_params(std::vector<std::string>& out) const;

  friend bool operator==(const ParamExpr&, const ParamExpr&) = default;
};

enum class Rel { Lt, Le, Eq, Gt, Ge };

/// Rectangular guard: Boolean combination of (variable, relation, constant).
struct Guard {
  enum class Kind { True, False, Atom, And, Or, Not };

  Kind kind = Kind::True;
  std::string var;
  Rel rel = Rel::Lt;
  std::uint32_t n = 0;
  std::vector<Guard> args;

  static Guard truth(bool v);
  static Guard atom(std::string var, Rel rel, std::uint32_t n);
  static Guard conj(Guard a, Guard b);
  static Guard disj(Guard a, Guard b);
  static Guard negate(Guard a);

  void collect_vars(std::vector<std::string>& out) const;

  friend bool operator==(const Guard&, const Guard&) = default;
};

struct Dist {
  enum class Kind { Dirac, Bernoulli, Uniform, UniformRange, Geometric, Binomial, NBinomial };

  Kind kind = Kind::Dirac;
  ParamExpr p;         // Bernoulli, Geometric, Binomial, NBinomial
  std::uint32_t a = 0;  // Dirac n, Uniform n, range lower bound, Binomial/NBinomial n
  std::uint32_t b = 0;  // range upper bound

  static Dist dirac(std::uint32_t n) { return Dist{Kind::Dirac, ParamExpr::number(0), n, 0}; }

  friend bool operator==(const Dist&, const Dist&) = default;
};

/// x := sum_y coef[y] * y + constant; coefficients are nonzero.
struct Affine {
  std::map<std::string, long> coef;
  long constant = 0;

  friend bool operator==(const Affine&, const Affine&) = default;
};

enum class StmtKind {
  // core
  Skip,
  AssignConst,  // x := n
  Decr,         // x := x - n (monus, n times)
  IidIncr,      // x += iid(dist, n*y)
  SubVar,       // x := x - n*y, exact; negative results are an error
  IfElse,
  Seq,
  While,
  // surface only
  AssignVar,   // x := y
  IncrVar,     // x += y
  IncrConst,   // x += n
  AssignDist,  // x := dist
  IncrDist,    // x += dist
  AssignIid,   // x := iid(dist, n*y)
  Affine,      // any other linear update
  PChoice,     // {P}[p]{Q}
  Switch,
  Repeat,
};

struct Stmt {
  StmtKind kind = StmtKind::Skip;
  std::string x;
  std::string y;
  std::uint32_t n = 0;
  Dist dist;
  syntax::Affine affine;
  Guard guard;
  ParamExpr prob;
  /// IfElse: then, else. Seq: items. While/Repeat: body. PChoice: left,
  /// right. Switch: case bodies in label order followed by the default body.
  std::vector<Stmt> kids;
  std::vector<std::uint32_t> labels;  // Switch case labels
  /// Loop-free specification attached to a While.
  std::shared_ptr<const Stmt> invariant;
  SourceLoc loc;

  static Stmt skip();
  static Stmt assign_const(std::string x, std::uint32_t n);
  static Stmt decr(std::string x, std::uint32_t n = 1);
  static Stmt iid_incr(std::string x, Dist d, std::string y, std::uint32_t mult = 1);
  static Stmt sub_var(std::string x, std::string y, std::uint32_t mult = 1);
  static Stmt if_else(Guard g, Stmt then_branch, Stmt else_branch);
  static Stmt seq(std::vector<Stmt> items);
  static Stmt while_loop(Guard g, Stmt body);
  static Stmt pchoice(ParamExpr p, Stmt left, Stmt right);

  bool operator==(const Stmt& other) const;
};

struct Program {
  std::vector<std::string> params;
  std::vector<std::string> vars;
  /// Variables that are zero on entry and excluded from the universal
  /// input of top-level loop checks.
  std::vector<std::string> locals;
  /// Temporaries introduced by desugaring; zero on entry and on exit.
  std::vector<std::string> temps;
  Stmt body;
  /// Specification from an "#invariant" section, attached to the unique
  /// top-level loop.
  std::optional<Stmt> spec;

  /// vars, then locals, then temps.
  std::vector<std::string> all_vars() const;
  bool declares_var(const std::string& v) const;
  bool declares_param(const std::string& p) const;

  friend bool operator==(const Program& a, const Program& b) {
    return a.params == b.params && a.vars == b.vars && a.locals == b.locals && a.temps == b.temps &&
           a.body == b.body &&
           a.spec == b.spec;
  }
};

/// Name of the program indeterminate for variable v: v in upper case.
std::string indet_name(const std::string& v);

}  // namespace pgfcheck::syntax
