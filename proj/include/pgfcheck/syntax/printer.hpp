#pragma once

#include <string>

#include "pgfcheck/syntax/ast.hpp"

namespace pgfcheck::syntax {

/// Source text that parses back to an equal AST.
std::string print(const Program& p);
std::string print(const Stmt& s, int indent = 0);
std::string print(const Guard& g);
std::string print(const ParamExpr& e);
std::string print(const Dist& d);

}  // namespace pgfcheck::syntax
