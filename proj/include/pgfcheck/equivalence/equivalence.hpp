#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pgfcheck/cas/closed_form.hpp"
#include "pgfcheck/syntax/ast.hpp"

namespace pgfcheck::equivalence {

using cas::ClosedForm;

/// prod_i 1/(1 - X_i U_i) over the given variables.
ClosedForm build_sop(const std::vector<std::string>& vars);

struct Counterexample {
  /// Point-mass input state; variables not listed are 0.
  std::map<std::string, std::uint32_t> input_state;
  /// [[Phi(I)]](X^state) - [[I]](X^state)
  ClosedForm discrepancy;
};

struct Verdict {
  enum class Kind { Equal, NotEqual, Error };

  Kind kind = Kind::Error;
  std::optional<Counterexample> witness;
  bool bound_exhausted = false;  // NotEqual without a witness within the bound
  std::string diagnostic;
  std::optional<ErrorKind> error_kind;
  /// [[Phi(I)]](g) and [[I]](g) on the universal input g.
  std::optional<ClosedForm> phi_sop;
  std::optional<ClosedForm> inv_sop;
  double ms = 0;

  /// Human-readable conclusion of an Equal verdict.
  std::string conclusion(bool uast_assumed) const;
};

std::string_view to_string(Verdict::Kind k);

struct CheckRequest {
  /// Declarations shared by loop and invariant.
  syntax::Program decls;
  /// A While whose body is loop-free; surface syntax is accepted.
  syntax::Stmt loop;
  /// Loop-free specification; surface syntax is accepted.
  syntax::Stmt invariant;
  bool uast_assumed = false;
  std::uint32_t degree_bound = 10;
  /// Variables whose input values are universally quantified; the others
  /// are 0 on entry. Empty means every declared variable.
  std::vector<std::string> quantified;
};

Verdict check_equiv(const CheckRequest& req);

/// First meta monomial (graded order, total degree <= bound) with a nonzero
/// coefficient in diff. `vars` lists the quantified variables.
std::optional<Counterexample> find_counterexample(const ClosedForm& diff, const std::vector<std::string>& vars,
                                                  std::uint32_t degree_bound);

struct LoopReport {
  std::string label;  // "while@line:column"
  Verdict verdict;
  std::vector<std::string> parameters;
};

struct CompositionalResult {
  std::vector<LoopReport> loops;
  /// The program with every loop replaced by its verified invariant, when
  /// all loops verified.
  std::optional<syntax::Stmt> loop_free_body;
};

struct CheckOptions {
  bool uast_assumed = false;
  std::uint32_t degree_bound = 10;
};

/// Attaches p.spec to the unique top-level loop. Throws MissingAnnotation
/// when there is no such loop, or when it is already annotated.
syntax::Program attach_spec(const syntax::Program& p);

/// Checks every loop innermost-first, replacing verified loops by their
/// invariants before checking enclosing loops.
CompositionalResult verify_compositional(const syntax::Program& p, const CheckOptions& opts = {});

}  // namespace pgfcheck::equivalence

namespace pgfcheck::equivalence {

/// Output distribution of p on the given input. Loops are replaced by
/// their verified invariants, which is exact for UAST loops. Throws
/// Usage naming the first loop that did not verify.
ClosedForm output_distribution(const syntax::Program& p, const ClosedForm& input, const CheckOptions& opts = {});

}  // namespace pgfcheck::equivalence
