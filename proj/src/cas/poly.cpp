#include "pgfcheck/cas/poly.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>

namespace pgfcheck::cas {

// ---------------------------------------------------------------- ExpVec

ExpVec::ExpVec(Indet x, std::uint32_t e) {
  if (e > 0) {
    entries_.emplace_back(x, e);
    degree_ = e;
  }
}

ExpVec::ExpVec(std::initializer_list<Entry> entries) {
  for (const auto& [x, e] : entries) *this = with(x, exponent(x) + e);
}

std::uint32_t ExpVec::exponent(Indet x) const {
  for (const auto& [y, e] : entries_) {
    if (y == x) return e;
  }
  return 0;
}

ExpVec ExpVec::with(Indet x, std::uint32_t e) const {
  ExpVec out;
  out.entries_.reserve(entries_.size() + 1);
  bool placed = false;
  for (const auto& entry : entries_) {
    if (!placed) {
      if (entry.first == x) {
        if (e > 0) out.entries_.emplace_back(x, e);
        placed = true;
        continue;
      }
      if (x < entry.first) {
        if (e > 0) out.entries_.emplace_back(x, e);
        placed = true;
      }
    }
    out.entries_.push_back(entry);
  }
  if (!placed && e > 0) out.entries_.emplace_back(x, e);
  for (const auto& entry : out.entries_) out.degree_ += entry.second;
  return out;
}

bool ExpVec::parameters_only() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Entry& e) { return e.first.is_parameter(); });
}

ExpVec operator*(const ExpVec& a, const ExpVec& b) {
  ExpVec out;
  out.entries_.reserve(a.entries_.size() + b.entries_.size());
  auto i = a.entries_.begin();
  auto j = b.entries_.begin();
  while (i != a.entries_.end() && j != b.entries_.end()) {
    if (i->first == j->first) {
      out.entries_.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    } else if (i->first < j->first) {
      out.entries_.push_back(*i++);
    } else {
      out.entries_.push_back(*j++);
    }
  }
  out.entries_.insert(out.entries_.end(), i, a.entries_.end());
  out.entries_.insert(out.entries_.end(), j, b.entries_.end());
  out.degree_ = a.degree_ + b.degree_;
  return out;
}

std::optional<ExpVec> divide(const ExpVec& a, const ExpVec& b) {
  if (b.degree_ > a.degree_) return std::nullopt;
  ExpVec out;
  auto i = a.entries_.begin();
  auto j = b.entries_.begin();
  while (j != b.entries_.end()) {
    if (i == a.entries_.end() || j->first < i->first) return std::nullopt;
    if (i->first == j->first) {
      if (i->second < j->second) return std::nullopt;
      if (i->second > j->second) out.entries_.emplace_back(i->first, i->second - j->second);
      ++i;
      ++j;
    } else {
      out.entries_.push_back(*i++);
    }
  }
  out.entries_.insert(out.entries_.end(), i, a.entries_.end());
  out.degree_ = a.degree_ - b.degree_;
  return out;
}

std::strong_ordering operator<=>(const ExpVec& a, const ExpVec& b) {
  if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
  auto i = a.entries_.begin();
  auto j = b.entries_.begin();
  while (i != a.entries_.end() && j != b.entries_.end()) {
    if (i->first == j->first) {
      if (i->second != j->second) return j->second <=> i->second;
      ++i;
      ++j;
    } else if (i->first < j->first) {
      return std::strong_ordering::less;
    } else {
      return std::strong_ordering::greater;
    }
  }
  if (i != a.entries_.end()) return std::strong_ordering::less;
  if (j != b.entries_.end()) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::size_t ExpVec::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& [x, e] : entries_) {
    h ^= x.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::uint32_t>{}(e) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::string ExpVec::to_string() const {
  std::string out;
  for (const auto& [x, e] : entries_) {
    if (!out.empty()) out += '*';
    out += x.name();
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

// ------------------------------------------------------------------ Poly

namespace {

bool term_less(const Poly::Term& a, const Poly::Term& b) { return a.first < b.first; }

}  // namespace

Poly::Poly(const Coeff& c) {
  if (c != 0) terms_.emplace_back(ExpVec{}, c);
}

Poly Poly::indet(Indet x, std::uint32_t exponent) { return monomial(ExpVec(x, exponent), Coeff(1)); }

Poly Poly::monomial(ExpVec m, const Coeff& c) {
  Poly p;
  if (c != 0) p.terms_.emplace_back(std::move(m), c);
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_less);
  Poly p;
  p.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first) {
      p.terms_.back().second += t.second;
      if (p.terms_.back().second == 0) p.terms_.pop_back();
    } else if (t.second != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

Coeff Poly::constant_term() const {
  if (!terms_.empty() && terms_.front().first.empty()) return terms_.front().second;
  return Coeff(0);
}

Poly Poly::series_constant_part() const {
  Poly out;
  for (const auto& t : terms_) {
    if (t.first.parameters_only()) out.terms_.push_back(t);
  }
  return out;
}

Coeff Poly::coeff(const ExpVec& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const ExpVec& key) { return t.first < key; });
  if (it != terms_.end() && it->first == m) return it->second;
  return Coeff(0);
}

std::uint32_t Poly::degree_in(Indet x) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.first.exponent(x));
  return d;
}

std::uint32_t Poly::valuation_in(Indet x) const {
  if (terms_.empty()) return 0;
  std::uint32_t v = UINT32_MAX;
  for (const auto& t : terms_) v = std::min(v, t.first.exponent(x));
  return v;
}

std::vector<Indet> Poly::indets() const {
  std::vector<Indet> out;
  for (const auto& t : terms_) {
    for (const auto& [x, e] : t.first.entries()) {
      if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint32_t Poly::total_degree() const { return terms_.empty() ? 0 : terms_.back().first.degree(); }

Poly operator+(const Poly& a, const Poly& b) {
  Poly out;
  out.terms_.reserve(a.terms_.size() + b.terms_.size());
  auto i = a.terms_.begin();
  auto j = b.terms_.begin();
  while (i != a.terms_.end() && j != b.terms_.end()) {
    auto c = i->first <=> j->first;
    if (c == 0) {
      Coeff s = i->second + j->second;
      if (s != 0) out.terms_.emplace_back(i->first, std::move(s));
      ++i;
      ++j;
    } else if (c < 0) {
      out.terms_.push_back(*i++);
    } else {
      out.terms_.push_back(*j++);
    }
  }
  out.terms_.insert(out.terms_.end(), i, a.terms_.end());
  out.terms_.insert(out.terms_.end(), j, b.terms_.end());
  return out;
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  if (a.is_constant()) return b.scaled(a.constant_term());
  if (b.is_constant()) return a.scaled(b.constant_term());
  if (a.terms_.size() == 1) return b.times_monomial(a.terms_[0].first).scaled(a.terms_[0].second);
  if (b.terms_.size() == 1) return a.times_monomial(b.terms_[0].first).scaled(b.terms_[0].second);
  std::unordered_map<ExpVec, Coeff, ExpVecHash> acc;
  acc.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      auto [it, inserted] = acc.try_emplace(ma * mb);
      if (inserted) {
        it->second = ca * cb;
      } else {
        it->second += ca * cb;
      }
    }
  }
  Poly out;
  out.terms_.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) out.terms_.emplace_back(m, std::move(c));
  }
  std::sort(out.terms_.begin(), out.terms_.end(), term_less);
  return out;
}

Poly Poly::scaled(const Coeff& c) const {
  if (c == 0) return Poly();
  Poly out = *this;
  if (c == 1) return out;
  for (auto& t : out.terms_) t.second *= c;
  return out;
}

Poly Poly::times_monomial(const ExpVec& m) const {
  Poly out;
  out.terms_.reserve(terms_.size());
  for (const auto& [e, c] : terms_) out.terms_.emplace_back(e * m, c);
  // Multiplying by a monomial preserves the graded-lex order.
  return out;
}

Poly Poly::pow(unsigned n) const {
  Poly result(1);
  Poly base = *this;
  while (n > 0) {
    if (n & 1U) result = result * base;
    n >>= 1U;
    if (n > 0) base = base * base;
  }
  return result;
}

Poly Poly::eval(Indet x, const Coeff& c) const {
  if (!contains(x)) return *this;
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [m, k] : terms_) {
    std::uint32_t e = m.exponent(x);
    if (e == 0) {
      out.emplace_back(m, k);
      continue;
    }
    if (c == 0) continue;
    Coeff v = k;
    if (c != 1) {
      mpz_class num, den;
      mpz_pow_ui(num.get_mpz_t(), c.get_num_mpz_t(), e);
      mpz_pow_ui(den.get_mpz_t(), c.get_den_mpz_t(), e);
      v *= Coeff(num, den);
    }
    out.emplace_back(m.without(x), std::move(v));
  }
  return from_terms(std::move(out));
}

Poly Poly::subst(Indet x, const Poly& q) const {
  if (!contains(x)) return *this;
  auto cs = coefficients_in(x);
  Poly result;
  Poly power(1);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i > 0) power = power * q;
    if (!cs[i].is_zero()) result += cs[i] * power;
  }
  return result;
}

Poly Poly::derivative(Indet x) const {
  std::vector<Term> out;
  for (const auto& [m, c] : terms_) {
    std::uint32_t e = m.exponent(x);
    if (e == 0) continue;
    out.emplace_back(m.with(x, e - 1), c * e);
  }
  return from_terms(std::move(out));
}

std::vector<Poly> Poly::coefficients_in(Indet x) const {
  std::vector<Poly> out(degree_in(x) + 1);
  for (const auto& [m, c] : terms_) {
    // Terms visited in ascending order stay ascending after removing x
    // only within a fixed exponent class, so collect and sort below.
    out[m.exponent(x)].terms_.emplace_back(m.without(x), c);
  }
  for (auto& p : out) std::sort(p.terms_.begin(), p.terms_.end(), term_less);
  return out;
}

Poly Poly::from_coefficients(Indet x, const std::vector<Poly>& coeffs) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    for (const auto& [m, c] : coeffs[i].terms_) {
      out.emplace_back(i == 0 ? m : m * ExpVec(x, static_cast<std::uint32_t>(i)), c);
    }
  }
  return from_terms(std::move(out));
}

Poly Poly::divide_by_power(Indet x, std::uint32_t k) const {
  if (k == 0) return *this;
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [m, c] : terms_) {
    std::uint32_t e = m.exponent(x);
    assert(e >= k);
    out.emplace_back(m.with(x, e - k), c);
  }
  return from_terms(std::move(out));
}

Poly Poly::truncated(Indet x, std::uint32_t bound) const {
  Poly out;
  for (const auto& t : terms_) {
    if (t.first.exponent(x) <= bound) out.terms_.push_back(t);
  }
  return out;
}

Poly Poly::divide_by_x_minus_one(Indet x) const {
  auto cs = coefficients_in(x);
  if (cs.size() <= 1) {
    assert(is_zero());
    return Poly();
  }
  std::vector<Poly> q(cs.size() - 1);
  Poly running;
  for (std::size_t k = cs.size() - 1; k >= 1; --k) {
    running += cs[k];
    q[k - 1] = running;
  }
  assert((running + cs[0]).is_zero());
  return from_coefficients(x, q);
}

Coeff Poly::content() const {
  if (terms_.empty()) return Coeff(1);
  mpz_class g = 0;
  mpz_class l = 1;
  for (const auto& [m, c] : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  Coeff out(g, l);
  out.canonicalize();
  return out;
}

std::string coeff_to_string(const Coeff& c) { return c.get_str(); }

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    bool negative = c < 0;
    Coeff mag = negative ? Coeff(-c) : c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (m.empty()) {
      out += coeff_to_string(mag);
    } else if (mag == 1) {
      out += m.to_string();
    } else {
      out += coeff_to_string(mag) + "*" + m.to_string();
    }
  }
  return out;
}

// ------------------------------------------------------------- division

std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return Poly();
  if (b.is_constant()) return a.scaled(Coeff(1) / b.constant_term());
  if (b.total_degree() > a.total_degree()) return std::nullopt;
  for (Indet x : b.indets()) {
    if (b.degree_in(x) > a.degree_in(x)) return std::nullopt;
    if (b.valuation_in(x) > a.valuation_in(x)) return std::nullopt;
  }
  const auto& [lm_b, lc_b] = b.leading_term();
  std::vector<Poly::Term> quotient;
  Poly r = a;
  while (!r.is_zero()) {
    const auto& [lm_r, lc_r] = r.leading_term();
    auto m = divide(lm_r, lm_b);
    if (!m) return std::nullopt;
    Coeff c = lc_r / lc_b;
    ExpVec mm = *m;
    r -= b.times_monomial(mm).scaled(c);
    quotient.emplace_back(std::move(mm), std::move(c));
  }
  return Poly::from_terms(std::move(quotient));
}

}  // namespace pgfcheck::cas
