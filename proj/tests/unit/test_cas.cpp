#include <doctest.h>

#include "pgfcheck/cas/closed_form.hpp"
#include "pgfcheck/cas/fps.hpp"
#include "pgfcheck/cas/parse.hpp"
#include "pgfcheck/errors.hpp"

using namespace pgfcheck;
using namespace pgfcheck::cas;

namespace {

Indet X() { return Indet::get("X", IndetKind::Program); }
Indet Y() { return Indet::get("Y", IndetKind::Program); }
Indet P() { return Indet::get("p", IndetKind::Parameter); }

ClosedForm cf(const std::string& s) {
  return parse_closed_form(s, [](std::string_view n) -> std::optional<Indet> {
    if (n == "p" || n == "q") return Indet::get(n, IndetKind::Parameter);
    if (n.size() == 1 && std::isupper(static_cast<unsigned char>(n[0]))) return Indet::get(n, IndetKind::Program);
    return std::nullopt;
  });
}

}  // namespace

TEST_CASE("poly arithmetic and rendering") {
  Poly x = Poly::indet(X());
  Poly y = Poly::indet(Y());
  Poly s = (x + y).pow(2);
  CHECK(s.to_string() == "X^2 + 2*X*Y + Y^2");
  CHECK((x - 1).to_string() == "-1 + X");
  CHECK((Poly(Coeff(1, 2)) - x.scaled(Coeff(1, 3))).to_string() == "1/2 - 1/3*X");
  CHECK(divide_exact(s, x + y) == x + y);
  CHECK_FALSE(divide_exact(s, x + 1).has_value());
  CHECK((x.pow(3) - 1).divide_by_x_minus_one(X()) == x * x + x + 1);
}

TEST_CASE("closed form validation") {
  CHECK_THROWS_AS(ClosedForm(Poly(1), Poly::indet(X())), Error);
  try {
    ClosedForm(Poly(1), Poly());
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DivisionByZeroFPS);
  }
  // parameters stay symbolic in the constant part
  CHECK_NOTHROW(ClosedForm(Poly(1), Poly::indet(P())));
  ClosedForm g = cf("1/(2 - X)");
  CHECK(g.to_string() == "(1)/(2 - X)");
  CHECK(cf_equal(g, cf("(1/2)/(1 - X/2)")));
}

TEST_CASE("geometric coefficients") {
  ClosedForm g = cf("(1/2)/(1 - 1/2*X)");
  auto cs = cf_coeffs(g, X(), 5);
  for (unsigned i = 0; i <= 5; ++i) {
    mpq_class expect(1, 1u << (i + 1));
    CHECK(*cs[i].as_rational() == expect);
  }
  CHECK(taylor(g, {{X(), 3}}).to_string() == "1/2 + 1/4*X + 1/8*X^2 + 1/16*X^3");
}

TEST_CASE("coefficients satisfy the defining convolution") {
  ClosedForm f = cf("(1 + p*X + Y)/((1 - X*Y)*(2 - p*X - Y))");
  auto cs = cf_coeffs(f, X(), 6);
  auto a = f.num().coefficients_in(X());
  auto b = f.den().coefficients_in(X());
  for (unsigned i = 0; i <= 6; ++i) {
    ClosedForm acc;
    for (unsigned j = 0; j <= i && j < b.size(); ++j) acc = acc + ClosedForm(b[j]) * cs[i - j];
    ClosedForm ai = i < a.size() ? ClosedForm(a[i]) : ClosedForm();
    CHECK(cf_equal(acc, ai));
    CHECK_FALSE(cs[i].contains(X()));
  }
}

TEST_CASE("eval at one cancels removable singularities") {
  ClosedForm f = cf("(1 - X^3)/(1 - X)");
  CHECK(f.to_string() == "(1 - X^3)/(1 - X)");
  CHECK(*cf_eval_at(f, X(), 1).as_rational() == 3);
  ClosedForm g = cf("1/(1 - X)");
  CHECK_THROWS_AS(cf_eval_at(g, X(), 1), Error);
}

TEST_CASE("derivative, substitution and shift") {
  ClosedForm g = cf("(1/2)/(1 - 1/2*X)");
  ClosedForm d = cf_derivative(g, X());
  CHECK(*cf_eval_at(d, X(), 1).as_rational() == 1);
  ClosedForm s = cf_subst(g, X(), cf("X*Y"));
  CHECK(cf_equal(s, cf("(1/2)/(1 - 1/2*X*Y)")));
  ClosedForm h = cf("X/(1 - X)");
  CHECK(cf_equal(cf_shift_down(h, X()), cf("1/(1 - X)")));
  CHECK_THROWS_AS(cf_shift_down(g, X()), Error);
}

TEST_CASE("laurent substitution performs exact subtraction") {
  // X^3 Y^2 with y subtracted from x: X^1 Y^2
  ClosedForm f(Poly::indet(X(), 3) * Poly::indet(Y(), 2));
  CHECK(cf_equal(cf_subst_laurent(f, Y(), X(), 1), ClosedForm(Poly::indet(X()) * Poly::indet(Y(), 2))));
  ClosedForm bad(Poly::indet(Y()));
  try {
    cf_subst_laurent(bad, Y(), X(), 1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NegativeExponent);
  }
}

TEST_CASE("rational literal parsing") {
  CHECK(*parse_rational("0.25") == mpq_class(1, 4));
  CHECK(*parse_rational("3/6") == mpq_class(1, 2));
  CHECK(*parse_rational("-7") == -7);
  CHECK_FALSE(parse_rational("1/0").has_value());
  CHECK_FALSE(parse_rational("a").has_value());
}
