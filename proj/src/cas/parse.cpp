#include "pgfcheck/cas/parse.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "pgfcheck/errors.hpp"

namespace pgfcheck::cas {

std::optional<Coeff> parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) return std::nullopt;
  bool neg = false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  std::string body = s.substr(i);
  if (body.empty()) return std::nullopt;
  Coeff out;
  auto all_digits = [](const std::string& t) {
    return !t.empty() && std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  if (auto slash = body.find('/'); slash != std::string::npos) {
    std::string n = body.substr(0, slash);
    std::string d = body.substr(slash + 1);
    if (!all_digits(n) || !all_digits(d)) return std::nullopt;
    mpz_class dz(d, 10);
    if (dz == 0) return std::nullopt;
    out = Coeff(mpz_class(n, 10), dz);
    out.canonicalize();
  } else if (auto dot = body.find('.'); dot != std::string::npos) {
    std::string ip = body.substr(0, dot);
    std::string fp = body.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!all_digits(ip) || (!fp.empty() && !all_digits(fp))) return std::nullopt;
    mpz_class scale = 1;
    for (std::size_t k = 0; k < fp.size(); ++k) scale *= 10;
    out = Coeff(mpz_class(ip + fp, 10), scale);
    out.canonicalize();
  } else {
    if (!all_digits(body)) return std::nullopt;
    out = Coeff(mpz_class(body, 10));
  }
  return neg ? Coeff(-out) : out;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const IndetResolver& resolve) : text_(text), resolve_(resolve) {}

  ClosedForm run() {
    ClosedForm out = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::ParseError, msg, SourceLoc{1, pos_ + 1});
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ClosedForm expr() {
    ClosedForm acc = term();
    while (true) {
      if (eat('+')) acc = acc + term();
      else if (eat('-')) acc = acc - term();
      else return acc;
    }
  }

  ClosedForm term() {
    ClosedForm acc = unary();
    while (true) {
      if (eat('*')) {
        acc = acc * unary();
      } else if (eat('/')) {
        std::size_t at = pos_;
        ClosedForm d = unary();
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        acc = acc / d;
      } else {
        return acc;
      }
    }
  }

  ClosedForm unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  ClosedForm power() {
    ClosedForm base = atom();
    if (!eat('^')) return base;
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected exponent");
    unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
    ClosedForm out(1);
    for (unsigned long i = 0; i < e; ++i) out = out * base;
    return out;
  }

  ClosedForm atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ClosedForm inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        ++pos_;
      }
      auto v = parse_rational(text_.substr(start, pos_ - start));
      if (!v) {
        pos_ = start;
        fail("malformed number");
      }
      return ClosedForm(*v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      auto name = text_.substr(start, pos_ - start);
      auto x = resolve_(name);
      if (!x) {
        throw Error(ErrorKind::UndeclaredVariable, "unknown indeterminate '" + std::string(name) + "'",
                    SourceLoc{1, start + 1});
      }
      return ClosedForm(Poly::indet(*x));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const IndetResolver& resolve_;
  std::size_t pos_ = 0;
};

}  // namespace

ClosedForm parse_closed_form(std::string_view text, const IndetResolver& resolve) {
  return Parser(text, resolve).run();
}

}  // namespace pgfcheck::cas
