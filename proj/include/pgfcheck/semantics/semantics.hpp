#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pgfcheck/cas/closed_form.hpp"
#include "pgfcheck/syntax/ast.hpp"

namespace pgfcheck::semantics {

using cas::ClosedForm;
using cas::Indet;

/// Program indeterminate of variable v ("x" -> X).
Indet var_indet(const std::string& v);
/// Meta indeterminate paired with variable v ("x" -> U_X).
Indet meta_indet(const std::string& v);
Indet param_indet(const std::string& name);

/// A closed form together with the variables it ranges over.
struct State {
  ClosedForm cf;
  std::map<std::string, Indet> varmap;
};

/// The PGF transformer of loop-free core programs. Probabilistic choice is
/// interpreted directly as a mixture and IfElse accepts any rectangular
/// guard; other surface statements must be desugared first.
class Semantics {
 public:
  explicit Semantics(const syntax::Program& p);

  Indet indet(const std::string& var) const;
  const std::map<std::string, Indet>& varmap() const { return varmap_; }

  /// Probability expression as a closed form over parameter indeterminates.
  ClosedForm probability(const syntax::ParamExpr& e) const;
  /// PGF of a distribution in the placeholder T.
  ClosedForm dist_pgf(const syntax::Dist& d) const;

  /// Sub-PGF of the mass of g satisfying the guard.
  ClosedForm filter(const ClosedForm& g, const syntax::Guard& guard) const;

  /// [[s]](g). Throws NotLoopFree on While.
  ClosedForm apply(const syntax::Stmt& s, const ClosedForm& g) const;
  State transform(const syntax::Stmt& s, const State& in) const;

  /// k-th Kleene iterate of a While loop with loop-free body applied to g.
  ClosedForm unroll(const syntax::Stmt& loop, std::uint32_t k, const ClosedForm& g) const;

 private:
  std::map<std::string, Indet> varmap_;
  std::vector<std::string> params_;
};

}  // namespace pgfcheck::semantics
