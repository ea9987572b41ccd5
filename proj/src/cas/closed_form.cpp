#include "pgfcheck/cas/closed_form.hpp"

#include <algorithm>

#include "pgfcheck/errors.hpp"

namespace pgfcheck::cas {

bool series_invertible(const Poly& p) {
  return std::any_of(p.terms().begin(), p.terms().end(),
                     [](const Poly::Term& t) { return t.first.parameters_only(); });
}

ClosedForm::ClosedForm(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(ErrorKind::DivisionByZeroFPS, "closed form with zero denominator");
  if (!series_invertible(den_)) {
    throw Error(ErrorKind::NonInvertibleDenominator,
                "denominator " + den_.to_string() + " has zero constant term");
  }
  normalize();
}

ClosedForm::ClosedForm(Poly num, Poly den, Unchecked) : num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

ClosedForm make_unchecked(Poly num, Poly den) {
  return ClosedForm(std::move(num), std::move(den), ClosedForm::Unchecked{});
}

void ClosedForm::normalize() {
  if (num_.is_zero()) {
    den_ = Poly(1);
    return;
  }
  Coeff c = den_.content();
  if (den_.terms().front().second < 0) c = -c;
  if (c != 1) {
    Coeff inv = Coeff(1) / c;
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
}

std::optional<Coeff> ClosedForm::as_rational() const {
  if (num_.is_constant() && den_.is_constant()) return num_.constant_term() / den_.constant_term();
  return std::nullopt;
}

std::vector<Indet> ClosedForm::indets() const {
  auto a = num_.indets();
  auto b = den_.indets();
  std::vector<Indet> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ClosedForm ClosedForm::operator-() const { return ClosedForm(-num_, den_, Unchecked{}); }

ClosedForm ClosedForm::scaled(const Coeff& c) const { return ClosedForm(num_.scaled(c), den_, Unchecked{}); }

ClosedForm ClosedForm::cancelled(const Poly& factor) const {
  if (factor.is_constant() || num_.is_zero()) return *this;
  Poly n = num_;
  Poly d = den_;
  while (!d.is_constant()) {
    auto qd = divide_exact(d, factor);
    if (!qd) break;
    auto qn = divide_exact(n, factor);
    if (!qn) break;
    n = std::move(*qn);
    d = std::move(*qd);
  }
  return ClosedForm(std::move(n), std::move(d), Unchecked{});
}

std::string ClosedForm::to_string() const {
  if (den_ == Poly(1)) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

namespace {

ClosedForm add(const ClosedForm& f, const ClosedForm& g, bool subtract) {
  const Poly gnum = subtract ? -g.num() : g.num();
  if (f.is_zero()) return make_unchecked(gnum, g.den());
  if (g.is_zero()) return f;
  if (f.den() == g.den()) return make_unchecked(f.num() + gnum, f.den());
  if (auto q = divide_exact(f.den(), g.den())) return make_unchecked(f.num() + gnum * *q, f.den());
  if (auto q = divide_exact(g.den(), f.den())) return make_unchecked(f.num() * *q + gnum, g.den());
  return make_unchecked(f.num() * g.den() + gnum * f.den(), f.den() * g.den());
}

}  // namespace

ClosedForm cf_arith(ArithOp op, const ClosedForm& f, const ClosedForm& g) {
  switch (op) {
    case ArithOp::Add: return add(f, g, false);
    case ArithOp::Sub: return add(f, g, true);
    case ArithOp::Mul:
      if (f.is_zero() || g.is_zero()) return ClosedForm();
      if (f.den() == g.num()) return make_unchecked(f.num(), g.den());
      if (g.den() == f.num()) return make_unchecked(g.num(), f.den());
      return make_unchecked(f.num() * g.num(), f.den() * g.den());
    case ArithOp::Div:
      if (g.is_zero()) throw Error(ErrorKind::DivisionByZeroFPS, "division by the zero series");
      return ClosedForm(f.num() * g.den(), f.den() * g.num());
  }
  return ClosedForm();
}

bool cf_equal(const ClosedForm& f, const ClosedForm& g) {
  if (f.den() == g.den()) return f.num() == g.num();
  return f.num() * g.den() == g.num() * f.den();
}

}  // namespace pgfcheck::cas
