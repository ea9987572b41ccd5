#pragma once

#include "pgfcheck/syntax/ast.hpp"

namespace pgfcheck::syntax {

struct DesugarOptions {
  /// Encode {P}[p]{Q} through a fresh Bernoulli temporary instead of keeping
  /// the choice for direct mixture semantics.
  bool pchoice_via_temp = false;
};

/// Rewrites p into core statements. Probabilistic choice is kept unless
/// requested otherwise; While loops keep their guard and their annotation.
/// Fresh temporaries "_t0", "_t1", ... are appended to p.temps.
Program desugar(const Program& p, const DesugarOptions& opts = {});

/// Desugars a statement, adding temporaries to prog.temps.
Stmt desugar_stmt(const Stmt& s, Program& prog, const DesugarOptions& opts = {});

/// if (g) {then} else {els} built from nested x < n tests.
Stmt compile_guard(const Guard& g, const Stmt& then_branch, const Stmt& else_branch);

bool is_core(const Stmt& s);
bool loop_free(const Stmt& s);
bool loop_free(const Program& p);

}  // namespace pgfcheck::syntax
