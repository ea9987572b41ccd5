#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pgfcheck/cas/closed_form.hpp"

namespace pgfcheck::cas {

/// Formal partial derivative d f / d x (quotient rule).
ClosedForm cf_derivative(const ClosedForm& f, Indet x);

/// f[x := g]. Throws NonInvertibleDenominator if the result is not an FPS.
ClosedForm cf_subst(const ClosedForm& f, Indet x, const ClosedForm& g);

/// f[x := c]. For c == 1, common factors (x - 1) are cancelled first;
/// throws IllDefinedProjection if the denominator still vanishes.
ClosedForm cf_eval_at(const ClosedForm& f, Indet x, const Coeff& c);

/// (f - f[x := 0]) / x when f[x := 0] == 0; throws ShiftPrecondition otherwise.
ClosedForm cf_shift_down(const ClosedForm& f, Indet x);

/// Series coefficients [x^0] f, ..., [x^upto] f as closed forms free of x.
std::vector<ClosedForm> cf_coeffs(const ClosedForm& f, Indet x, std::uint32_t upto);

/// [x^i] f
ClosedForm cf_coeff(const ClosedForm& f, Indet x, std::uint32_t i);

/// sum_{i < n} ([x^i] f) x^i
ClosedForm cf_truncate_below(const ClosedForm& f, Indet x, std::uint32_t n);

using DegreeBounds = std::vector<std::pair<Indet, std::uint32_t>>;

/// Taylor polynomial of f: all coefficients of monomials whose exponent in
/// each listed indeterminate is within its bound. Coefficients must be
/// polynomial (NonPolynomialCoefficient otherwise).
Poly taylor(const ClosedForm& f, const DegreeBounds& bounds);

/// Like taylor, but coefficients may remain rational closed forms in the
/// unlisted indeterminates.
ClosedForm taylor_cf(const ClosedForm& f, const DegreeBounds& bounds);

/// Substitutes y := y * x^(-k) as a Laurent substitution. Throws
/// NegativeExponent when the result is not a power series in x.
ClosedForm cf_subst_laurent(const ClosedForm& f, Indet y, Indet x, std::uint32_t k);

/// Outcome of evaluating num/den at x = 1 without an FPS validity check.
enum class EvalOutcome { Finite, Diverges };

/// num/den at x = 1 after cancelling factors (x - 1). Diverges when the
/// denominator vanishes but the numerator does not.
EvalOutcome eval_at_one_raw(Poly& num, Poly& den, Indet x);

}  // namespace pgfcheck::cas
