#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgfcheck/cas/poly.hpp"

namespace pgfcheck::cas {

/// Rational closed form num/den of a formal power series.
///
/// Invariant: den's series constant part (every program, meta and
/// placeholder indeterminate set to 0, parameters left symbolic) is
/// nonzero, so den is invertible as an FPS. Fractions are not reduced to
/// lowest terms; num and den are only content-normalized so that den has
/// coprime integer coefficients and a positive lowest term. Use cf_equal
/// for semantic comparison.
class ClosedForm {
 public:
  ClosedForm() : den_(1) {}
  ClosedForm(const Poly& p) : num_(p), den_(1) {}  // NOLINT
  ClosedForm(const Coeff& c) : num_(c), den_(1) {}  // NOLINT
  ClosedForm(long c) : num_(c), den_(1) {}  // NOLINT
  /// Throws DivisionByZeroFPS for den == 0 and NonInvertibleDenominator
  /// when the series constant part of den vanishes.
  ClosedForm(Poly num, Poly den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  /// The value as an exact rational if no indeterminate occurs.
  std::optional<Coeff> as_rational() const;
  bool contains(Indet x) const { return num_.contains(x) || den_.contains(x); }
  std::vector<Indet> indets() const;

  ClosedForm operator-() const;
  ClosedForm scaled(const Coeff& c) const;

  /// Divides num and den by `factor` as often as both are divisible.
  ClosedForm cancelled(const Poly& factor) const;

  /// "num" when den is 1, otherwise "(num)/(den)".
  std::string to_string() const;

  /// Structural identity of the stored representation.
  bool identical(const ClosedForm& other) const { return num_ == other.num_ && den_ == other.den_; }

 private:
  struct Unchecked {};
  ClosedForm(Poly num, Poly den, Unchecked);
  void normalize();

  Poly num_;
  Poly den_;

  friend ClosedForm make_unchecked(Poly num, Poly den);
};

/// Builds num/den after content normalization, skipping the invertibility
/// check. Only for representations that are known valid.
ClosedForm make_unchecked(Poly num, Poly den);

enum class ArithOp { Add, Sub, Mul, Div };

ClosedForm cf_arith(ArithOp op, const ClosedForm& f, const ClosedForm& g);

inline ClosedForm operator+(const ClosedForm& f, const ClosedForm& g) { return cf_arith(ArithOp::Add, f, g); }
inline ClosedForm operator-(const ClosedForm& f, const ClosedForm& g) { return cf_arith(ArithOp::Sub, f, g); }
inline ClosedForm operator*(const ClosedForm& f, const ClosedForm& g) { return cf_arith(ArithOp::Mul, f, g); }
inline ClosedForm operator/(const ClosedForm& f, const ClosedForm& g) { return cf_arith(ArithOp::Div, f, g); }

/// Semantic equality by cross-multiplication: f.num * g.den == g.num * f.den.
bool cf_equal(const ClosedForm& f, const ClosedForm& g);

/// True iff the series constant part of p is nonzero.
bool series_invertible(const Poly& p);

}  // namespace pgfcheck::cas
