#pragma once

#include <string_view>

#include "pgfcheck/syntax/ast.hpp"

namespace pgfcheck::syntax {

/// Parses a program file: optional "params", "vars" and "locals" headers,
/// a statement list, and an optional "#invariant" section on its own line.
/// Throws Error with a source location on failure.
Program parse_program(std::string_view source);

/// Parses a specification file against the declarations of `decls`. The
/// file may repeat or extend the headers; new names are added to `decls`.
Stmt parse_spec(std::string_view source, Program& decls);

/// Parses a rectangular guard over the variables declared in `decls`.
Guard parse_guard(std::string_view source, const Program& decls);

/// Checks declarations and name usage of a program built in code.
void validate(const Program& p);

}  // namespace pgfcheck::syntax
