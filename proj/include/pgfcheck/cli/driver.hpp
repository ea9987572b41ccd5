#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pgfcheck/cas/closed_form.hpp"
#include "pgfcheck/sampler/sampler.hpp"
#include "pgfcheck/syntax/ast.hpp"

namespace pgfcheck::cli {

/// Input distribution from the command line: a closed form over variable
/// names ("N^5", "(1/2)/(1 - 1/2*N)"), a point mass "n=5, c=2", or
/// "x~geometric(1/2), y~dirac(3)".
/// Empty text is the all-zero point mass.
cas::ClosedForm parse_input(const std::string& text, const syntax::Program& decls);

/// Point-mass input as a concrete state: "N^5*C^2" or "n=5, c=2".
sampler::ConcreteState parse_state(const std::string& text, const syntax::Program& decls);

/// "a=1/3" bindings.
std::map<std::string, cas::Coeff> parse_bindings(const std::vector<std::string>& items, const syntax::Program& decls);

/// Substitutes bound parameters.
cas::ClosedForm bind_params(const cas::ClosedForm& f, const std::map<std::string, cas::Coeff>& params);

/// Taylor expansion of f keeping the terms of total program degree at
/// most `degree`; parameters stay symbolic.
cas::ClosedForm expand_series(const cas::ClosedForm& f, std::uint32_t degree);

/// Reads a file; throws Usage when it cannot be opened.
std::string read_file(const std::string& path);

/// Command-line entry point. Exit codes: 0 success or Equal, 1 NotEqual,
/// 2 errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pgfcheck::cli
