#include "pgfcheck/cas/fps.hpp"

#include <algorithm>

#include "pgfcheck/errors.hpp"

namespace pgfcheck::cas {

namespace {

ClosedForm times_power(const ClosedForm& f, Indet x, std::uint32_t i) {
  if (i == 0 || f.is_zero()) return f;
  return make_unchecked(f.num().times_monomial(ExpVec(x, i)), f.den());
}

ClosedForm divide_by_poly(const ClosedForm& f, const Poly& p) {
  if (p.is_constant()) return f.scaled(Coeff(1) / p.constant_term());
  if (auto q = divide_exact(f.num(), p)) return make_unchecked(std::move(*q), f.den());
  return make_unchecked(f.num(), f.den() * p).cancelled(p);
}

std::optional<Poly> as_polynomial(const ClosedForm& f) {
  if (f.den().is_constant()) return f.num().scaled(Coeff(1) / f.den().constant_term());
  return divide_exact(f.num(), f.den());
}

}  // namespace

ClosedForm cf_derivative(const ClosedForm& f, Indet x) {
  if (!f.contains(x)) return ClosedForm();
  if (!f.den().contains(x)) return make_unchecked(f.num().derivative(x), f.den());
  Poly n = f.num().derivative(x) * f.den() - f.num() * f.den().derivative(x);
  return make_unchecked(std::move(n), f.den() * f.den());
}

ClosedForm cf_subst(const ClosedForm& f, Indet x, const ClosedForm& g) {
  if (!f.contains(x)) return f;
  if (g.is_polynomial()) {
    Poly q = g.num().scaled(Coeff(1) / g.den().constant_term());
    return ClosedForm(f.num().subst(x, q), f.den().subst(x, q));
  }
  // Homogenize: a(p/q) = (sum_j a_j p^j q^(N-j)) / q^N with N shared by num and den.
  auto a = f.num().coefficients_in(x);
  auto b = f.den().coefficients_in(x);
  std::size_t n = std::max(a.size(), b.size());
  std::vector<Poly> ppow{Poly(1)};
  std::vector<Poly> qpow{Poly(1)};
  for (std::size_t j = 1; j < n; ++j) {
    ppow.push_back(ppow.back() * g.num());
    qpow.push_back(qpow.back() * g.den());
  }
  auto combine = [&](const std::vector<Poly>& cs) {
    Poly out;
    for (std::size_t j = 0; j < cs.size(); ++j) {
      if (!cs[j].is_zero()) out += cs[j] * ppow[j] * qpow[n - 1 - j];
    }
    return out;
  };
  return ClosedForm(combine(a), combine(b));
}

ClosedForm cf_eval_at(const ClosedForm& f, Indet x, const Coeff& c) {
  if (!f.contains(x)) return f;
  if (c == 1) {
    Poly n = f.num();
    Poly d = f.den();
    if (eval_at_one_raw(n, d, x) == EvalOutcome::Diverges) {
      throw Error(ErrorKind::IllDefinedProjection,
                  "denominator vanishes at " + x.name() + " = 1 in " + f.to_string());
    }
    if (!series_invertible(d)) {
      throw Error(ErrorKind::IllDefinedProjection,
                  "projection " + x.name() + " = 1 of " + f.to_string() + " is not a power series");
    }
    return ClosedForm(std::move(n), std::move(d));
  }
  Poly d = f.den().eval(x, c);
  if (d.is_zero() || !series_invertible(d)) {
    throw Error(ErrorKind::IllDefinedProjection,
                "denominator vanishes at " + x.name() + " = " + coeff_to_string(c));
  }
  return ClosedForm(f.num().eval(x, c), std::move(d));
}

EvalOutcome eval_at_one_raw(Poly& num, Poly& den, Indet x) {
  while (true) {
    if (num.is_zero()) {
      den = Poly(1);
      return EvalOutcome::Finite;
    }
    Poly n1 = num.eval(x, 1);
    Poly d1 = den.eval(x, 1);
    if (!d1.is_zero()) {
      num = std::move(n1);
      den = std::move(d1);
      return EvalOutcome::Finite;
    }
    if (!n1.is_zero()) return EvalOutcome::Diverges;
    num = num.divide_by_x_minus_one(x);
    den = den.divide_by_x_minus_one(x);
  }
}

ClosedForm cf_shift_down(const ClosedForm& f, Indet x) {
  if (f.is_zero()) return f;
  if (f.num().valuation_in(x) == 0) {
    throw Error(ErrorKind::ShiftPrecondition,
                "shift requires a vanishing constant coefficient in " + x.name());
  }
  return make_unchecked(f.num().divide_by_power(x, 1), f.den());
}

std::vector<ClosedForm> cf_coeffs(const ClosedForm& f, Indet x, std::uint32_t upto) {
  std::vector<ClosedForm> out;
  out.reserve(upto + 1);
  auto a = f.num().coefficients_in(x);
  auto coef = [&](std::uint32_t i) -> const Poly& {
    static const Poly zero;
    return i < a.size() ? a[i] : zero;
  };
  if (!f.den().contains(x)) {
    for (std::uint32_t i = 0; i <= upto; ++i) out.push_back(make_unchecked(coef(i), f.den()));
    return out;
  }
  // c_i = (a_i - sum_{j>=1} b_j c_{i-j}) / b_0
  auto b = f.den().coefficients_in(x);
  const Poly& b0 = b[0];
  for (std::uint32_t i = 0; i <= upto; ++i) {
    ClosedForm s(coef(i));
    for (std::uint32_t j = 1; j < b.size() && j <= i; ++j) {
      if (b[j].is_zero() || out[i - j].is_zero()) continue;
      s = s - ClosedForm(b[j]) * out[i - j];
    }
    out.push_back(divide_by_poly(s, b0));
  }
  return out;
}

ClosedForm cf_coeff(const ClosedForm& f, Indet x, std::uint32_t i) {
  if (!f.den().contains(x)) {
    auto a = f.num().coefficients_in(x);
    return i < a.size() ? make_unchecked(a[i], f.den()) : ClosedForm();
  }
  return cf_coeffs(f, x, i).back();
}

ClosedForm cf_truncate_below(const ClosedForm& f, Indet x, std::uint32_t n) {
  if (n == 0) return ClosedForm();
  if (!f.den().contains(x)) return make_unchecked(f.num().truncated(x, n - 1), f.den());
  auto cs = cf_coeffs(f, x, n - 1);
  ClosedForm out;
  for (std::uint32_t i = 0; i < n; ++i) out = out + times_power(cs[i], x, i);
  return out;
}

namespace {

ClosedForm taylor_rec(const ClosedForm& f, const DegreeBounds& bounds, std::size_t idx) {
  if (idx == bounds.size() || f.is_zero()) return f;
  auto [x, bound] = bounds[idx];
  auto cs = cf_coeffs(f, x, bound);
  ClosedForm out;
  for (std::uint32_t i = 0; i <= bound; ++i) out = out + times_power(taylor_rec(cs[i], bounds, idx + 1), x, i);
  return out;
}

Poly taylor_poly_rec(const ClosedForm& f, const DegreeBounds& bounds, std::size_t idx) {
  if (f.is_zero()) return Poly();
  if (idx == bounds.size()) {
    auto p = as_polynomial(f);
    if (!p) {
      throw Error(ErrorKind::NonPolynomialCoefficient,
                  "coefficient " + f.to_string() + " is not a polynomial");
    }
    return *p;
  }
  auto [x, bound] = bounds[idx];
  auto cs = cf_coeffs(f, x, bound);
  Poly out;
  for (std::uint32_t i = 0; i <= bound; ++i) {
    out += taylor_poly_rec(cs[i], bounds, idx + 1).times_monomial(ExpVec(x, i));
  }
  return out;
}

}  // namespace

Poly taylor(const ClosedForm& f, const DegreeBounds& bounds) { return taylor_poly_rec(f, bounds, 0); }

ClosedForm taylor_cf(const ClosedForm& f, const DegreeBounds& bounds) { return taylor_rec(f, bounds, 0); }

ClosedForm cf_subst_laurent(const ClosedForm& f, Indet y, Indet x, std::uint32_t k) {
  if (k == 0 || !f.contains(y)) return f;
  std::uint32_t e_max = std::max(f.num().degree_in(y), f.den().degree_in(y));
  auto shift = [&](const Poly& p) {
    std::vector<Poly::Term> terms;
    terms.reserve(p.size());
    for (const auto& [m, c] : p.terms()) {
      std::uint32_t e = m.exponent(y);
      terms.emplace_back(m.with(x, m.exponent(x) + k * (e_max - e)), c);
    }
    return Poly::from_terms(std::move(terms));
  };
  Poly n = shift(f.num());
  Poly d = shift(f.den());
  std::uint32_t v = d.valuation_in(x);
  if (!n.is_zero()) v = std::min(v, n.valuation_in(x));
  n = n.divide_by_power(x, v);
  d = d.divide_by_power(x, v);
  if (d.valuation_in(x) > 0 || !series_invertible(d)) {
    throw Error(ErrorKind::NegativeExponent,
                "subtracting " + y.name() + " from " + x.name() + " can yield a negative value");
  }
  return ClosedForm(std::move(n), std::move(d));
}

}  // namespace pgfcheck::cas
