#pragma once

#include <random>
#include <string>
#include <vector>

#include "pgfcheck/cas/closed_form.hpp"
#include "pgfcheck/cas/parse.hpp"

namespace testsupport {

/// Random loop-free programs and PGF inputs over a fixed variable list.
class Gen {
 public:
  explicit Gen(std::uint64_t seed, std::vector<std::string> vars = {"x", "y"}) : rng_(seed), vars_(std::move(vars)) {}

  std::mt19937_64& rng() { return rng_; }
  const std::vector<std::string>& vars() const { return vars_; }

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return uniform(0, 1) == 1; }
  const std::string& var() { return vars_[uniform(0, static_cast<int>(vars_.size()) - 1)]; }

  /// "i/d" strictly between 0 and 1
  std::string prob() {
    int d = uniform(2, 5);
    return std::to_string(uniform(1, d - 1)) + "/" + std::to_string(d);
  }

  std::string dist() {
    switch (uniform(0, 4)) {
      case 0: return "dirac(" + std::to_string(uniform(0, 3)) + ")";
      case 1: return "bernoulli(" + prob() + ")";
      case 2: return "geometric(" + prob() + ")";
      case 3: {
        int a = uniform(0, 2);
        return "unif(" + std::to_string(a) + ", " + std::to_string(a + uniform(0, 2)) + ")";
      }
      default: return "binomial(" + prob() + ", " + std::to_string(uniform(1, 3)) + ")";
    }
  }

  std::string atom() {
    static const char* rels[] = {"<", "<=", "=", ">", ">="};
    return var() + " " + rels[uniform(0, 4)] + " " + std::to_string(uniform(0, 3));
  }

  std::string guard(int depth = 2) {
    if (depth == 0 || uniform(0, 2) == 0) return atom();
    switch (uniform(0, 2)) {
      case 0: return "(" + guard(depth - 1) + " & " + guard(depth - 1) + ")";
      case 1: return "(" + guard(depth - 1) + " | " + guard(depth - 1) + ")";
      default: return "!(" + guard(depth - 1) + ")";
    }
  }

  std::string stmt(int depth) {
    const std::string& x = var();
    std::string y = other(x);
    int pick = uniform(0, depth > 0 ? 8 : 6);
    switch (pick) {
      case 0: return x + " := " + std::to_string(uniform(0, 3));
      case 1: return x + " := " + x + " + " + std::to_string(uniform(1, 2));
      case 2: return x + " := " + x + " - " + std::to_string(uniform(1, 2));
      case 3: return y.empty() ? x + " := " + dist() : x + " += iid(" + dist() + ", " + y + ")";
      case 4: return x + " := " + dist();
      case 5: return y.empty() ? "skip" : x + " := " + y;
      case 6: return x + " += " + dist();
      case 7: return "if (" + guard() + ") { " + block(depth - 1) + " } else { " + block(depth - 1) + " }";
      default: return "{ " + block(depth - 1) + " } [" + prob() + "] { " + block(depth - 1) + " }";
    }
  }

  std::string block(int depth) {
    int n = uniform(1, 3);
    std::string out;
    for (int i = 0; i < n; ++i) out += (i ? "; " : "") + stmt(depth);
    return out;
  }

  std::string program(int depth = 2) {
    std::string head = "vars ";
    for (std::size_t i = 0; i < vars_.size(); ++i) head += (i ? ", " : "") + vars_[i];
    return head + ";\n" + block(depth) + "\n";
  }

  /// Closed-form text of a random distribution with total mass 1.
  std::string input() {
    std::string out;
    for (const auto& v : vars_) {
      std::string X(1, static_cast<char>(std::toupper(v[0])));
      std::string part = component(X);
      if (coin()) {
        std::string w = prob();
        part = "(" + w + "*" + part + " + (1 - " + w + ")*" + component(X) + ")";
      }
      out += (out.empty() ? "" : "*") + part;
    }
    return out;
  }

 private:
  std::string other(const std::string& x) {
    std::vector<std::string> rest;
    for (const auto& v : vars_) {
      if (v != x) rest.push_back(v);
    }
    if (rest.empty()) return "";
    return rest[uniform(0, static_cast<int>(rest.size()) - 1)];
  }

  std::string component(const std::string& X) {
    std::string q = prob();
    switch (uniform(0, 2)) {
      case 0: return X + "^" + std::to_string(uniform(0, 3));
      case 1: return "((1 - " + q + ")/(1 - " + q + "*" + X + "))";
      default: return "(1 - " + q + " + " + q + "*" + X + ")";
    }
  }

  std::mt19937_64 rng_;
  std::vector<std::string> vars_;
};

}  // namespace testsupport
