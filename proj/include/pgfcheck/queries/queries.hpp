#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pgfcheck/cas/closed_form.hpp"
#include "pgfcheck/syntax/ast.hpp"

namespace pgfcheck::queries {

using cas::ClosedForm;
using cas::Indet;

/// An exact value (rational, or a closed form over parameters) or +infinity.
struct QueryResult {
  bool infinite = false;
  ClosedForm value;

  static QueryResult finite(ClosedForm v) { return {false, std::move(v)}; }
  static QueryResult infinity() { return {true, ClosedForm()}; }

  /// "inf", an exact rational, or a closed form.
  std::string to_string() const;
};

/// Evaluates every program indeterminate of f at 1. Returns infinity when
/// some denominator vanishes there while the numerator does not.
QueryResult eval_at_one(const ClosedForm& f);

QueryResult mass(const ClosedForm& g);

/// E[x1^(k1) x2^(k2) ...] with x^(k) the falling factorial.
QueryResult factorial_moment(const ClosedForm& g, const std::vector<std::pair<Indet, std::uint32_t>>& orders);

/// E[expr] for a polynomial expr over program indeterminates.
QueryResult expectation(const ClosedForm& g, const cas::Poly& expr);

/// E[x(x-1)] + E[x] - E[x]^2 on the unnormalized g. Throws IndeterminateForm
/// when the mean is infinite.
QueryResult variance(const ClosedForm& g, Indet x);

/// Mass of g restricted to the event.
QueryResult prob_event(const ClosedForm& g, const syntax::Guard& event, const syntax::Program& decls);

/// Sets every program indeterminate outside `keep` to 1.
ClosedForm marginal(const ClosedForm& g, const std::vector<Indet>& keep);

/// Probability of the state that assigns `state` and 0 to all other variables.
QueryResult coeff_state(const ClosedForm& g, const std::map<Indet, std::uint32_t>& state);

struct Query {
  enum class Kind { Mass, Expectation, Variance, Probability, Marginal, Coefficient };
  Kind kind = Kind::Mass;
  cas::Poly expr;                         // Expectation
  std::optional<Indet> var;               // Variance
  syntax::Guard event;                    // Probability
  std::vector<Indet> keep;                // Marginal
  std::map<Indet, std::uint32_t> state;   // Coefficient
};

/// Parses "mass", "E[expr]", "Var[x]", "P[guard]", "marginal[x,y]" or
/// "coeff[x=2, y=3]". Throws QuerySyntax.
Query parse_query(std::string_view text, const syntax::Program& decls);

/// Runs a query; marginals render as closed forms.
std::string run_query(const Query& q, const ClosedForm& g, const syntax::Program& decls);

}  // namespace pgfcheck::queries
