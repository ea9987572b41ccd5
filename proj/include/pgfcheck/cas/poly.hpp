#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgfcheck/cas/indet.hpp"

namespace pgfcheck::cas {

/// Exact rational coefficient. mpq_class keeps the canonical form
/// (positive denominator, coprime parts) after every arithmetic operation.
using Coeff = mpq_class;

/// Sparse exponent vector: (indeterminate, exponent >= 1) pairs sorted by
/// the global indeterminate order. Absent indeterminates have exponent 0.
class ExpVec {
 public:
  using Entry = std::pair<Indet, std::uint32_t>;

  ExpVec() = default;
  ExpVec(Indet x, std::uint32_t e);
  ExpVec(std::initializer_list<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::uint32_t degree() const { return degree_; }
  std::uint32_t exponent(Indet x) const;

  /// Copy with the exponent of x replaced (0 removes it).
  ExpVec with(Indet x, std::uint32_t e) const;
  ExpVec without(Indet x) const { return with(x, 0); }

  /// True iff every indeterminate present is a parameter.
  bool parameters_only() const;

  friend ExpVec operator*(const ExpVec& a, const ExpVec& b);
  /// a / b, valid only when b divides a.
  friend std::optional<ExpVec> divide(const ExpVec& a, const ExpVec& b);

  friend bool operator==(const ExpVec& a, const ExpVec& b) { return a.entries_ == b.entries_; }
  /// Graded lexicographic order: total degree first; within a degree, a
  /// larger exponent of the smallest indeterminate sorts first, so
  /// X^2 < X*Y < Y^2.
  friend std::strong_ordering operator<=>(const ExpVec& a, const ExpVec& b);

  std::size_t hash() const;
  std::string to_string() const;

 private:
  std::vector<Entry> entries_;
  std::uint32_t degree_ = 0;
};

struct ExpVecHash {
  std::size_t operator()(const ExpVec& e) const noexcept { return e.hash(); }
};

/// Sparse multivariate polynomial with rational coefficients. Terms are
/// kept sorted ascending in graded-lex order without zero coefficients, so
/// structural equality is polynomial equality.
class Poly {
 public:
  using Term = std::pair<ExpVec, Coeff>;

  Poly() = default;
  Poly(const Coeff& c);  // NOLINT: constants convert implicitly
  Poly(long c) : Poly(Coeff(c)) {}  // NOLINT
  static Poly indet(Indet x, std::uint32_t exponent = 1);
  static Poly monomial(ExpVec m, const Coeff& c);
  /// Takes arbitrary terms; merges duplicates and drops zeros.
  static Poly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.empty()); }
  /// Coefficient of the empty monomial.
  Coeff constant_term() const;
  /// Sum of terms that mention parameters only (series indeterminates at 0).
  Poly series_constant_part() const;
  /// Coefficient of a given monomial.
  Coeff coeff(const ExpVec& m) const;
  const Term& leading_term() const { return terms_.back(); }

  std::uint32_t degree_in(Indet x) const;
  /// Smallest exponent of x over all terms (0 for the zero polynomial).
  std::uint32_t valuation_in(Indet x) const;
  bool contains(Indet x) const { return degree_in(x) > 0; }
  std::vector<Indet> indets() const;
  std::uint32_t total_degree() const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;
  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

  Poly scaled(const Coeff& c) const;
  Poly times_monomial(const ExpVec& m) const;
  Poly pow(unsigned n) const;

  /// p[x := c]
  Poly eval(Indet x, const Coeff& c) const;
  /// p[x := q]
  Poly subst(Indet x, const Poly& q) const;
  /// Formal partial derivative.
  Poly derivative(Indet x) const;
  /// Coefficients c_i with p = sum_i c_i x^i; entry i is x-free.
  std::vector<Poly> coefficients_in(Indet x) const;
  static Poly from_coefficients(Indet x, const std::vector<Poly>& coeffs);
  /// p / x^k; requires valuation_in(x) >= k.
  Poly divide_by_power(Indet x, std::uint32_t k) const;
  /// Keeps only the terms whose x-exponent is <= bound.
  Poly truncated(Indet x, std::uint32_t bound) const;
  /// Quotient by (x - 1); requires p[x := 1] == 0.
  Poly divide_by_x_minus_one(Indet x) const;

  /// Positive rational gcd of all coefficients (1 for the zero polynomial).
  Coeff content() const;

  /// Canonical rendering: ascending graded-lex terms, "n" or "n/d"
  /// coefficients, monomials joined by "*", exponents as "^k".
  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

/// Exact division a / b when b divides a as polynomials, else nullopt.
std::optional<Poly> divide_exact(const Poly& a, const Poly& b);

std::string coeff_to_string(const Coeff& c);

}  // namespace pgfcheck::cas
