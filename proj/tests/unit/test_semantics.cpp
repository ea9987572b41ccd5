#include <doctest.h>

#include "pgfcheck/cas/fps.hpp"
#include "pgfcheck/cas/parse.hpp"
#include "pgfcheck/semantics/semantics.hpp"
#include "pgfcheck/syntax/desugar.hpp"
#include "pgfcheck/syntax/parser.hpp"

using namespace pgfcheck;
using cas::ClosedForm;

namespace {

ClosedForm cf(const std::string& s) {
  return cas::parse_closed_form(s, [](std::string_view n) -> std::optional<cas::Indet> {
    if (n == "p") return cas::Indet::get(n, cas::IndetKind::Parameter);
    return cas::Indet::get(n, cas::IndetKind::Program);
  });
}

ClosedForm run(const std::string& src, const std::string& input) {
  syntax::Program p = syntax::parse_program(src);
  syntax::Program d = syntax::desugar(p);
  return semantics::Semantics(d).apply(d.body, cf(input));
}

void same(const ClosedForm& a, const ClosedForm& b) {
  CAPTURE(a.to_string());
  CAPTURE(b.to_string());
  CHECK(cas::cf_equal(a, b));
}

}  // namespace

TEST_CASE("assignments") {
  same(run("vars x; x := 3", "1/(2 - X)"), cf("X^3"));
  same(run("vars x, y; x := 0", "X*Y/2 + 1/2"), cf("Y/2 + 1/2"));
  // monus: mass 3/4 on 0, tail 2^-(k+2)
  same(run("vars x; x := x - 1", "1/(2 - X)"), cf("1/2 + 1/(2 - X) * 1/2"));
  same(run("vars x; x := x + 2", "1/2 + X/2"), cf("X^2/2 + X^3/2"));
}

TEST_CASE("iid increments") {
  same(run("vars x, y; x += iid(bernoulli(1/2), y)", "Y^3"), cf("Y^3*((1 + X)/2)^3"));
  same(run("vars x, y; x += iid(geometric(1/2), y)", "Y"), cf("Y/(2 - X)"));
  same(run("vars x, y; x := y", "X^4*Y^2"), cf("X^2*Y^2"));
  same(run("vars x, y; x := binomial(1/2, y)", "Y^2"), cf("Y^2*(1 + X)^2/4"));
  same(run("vars x; x += unif(1, 3)", "1"), cf("(X + X^2 + X^3)/3"));
  same(run("vars x; x := uniform(2)", "X^5"), cf("(1 + X)/2"));
  same(run("vars x; x := nbinomial(1/2, 2)", "1"), cf("1/(2 - X)^2"));
}

TEST_CASE("exact subtraction") {
  same(run("vars x, y; x := x - y", "X^5*Y^2"), cf("X^3*Y^2"));
  CHECK_THROWS_AS(run("vars x, y; x := x - y", "X*Y^2"), Error);
  same(run("vars x, y; x := 2*y - 1", "Y^3"), cf("X^5*Y^3"));
}

TEST_CASE("conditionals and choice") {
  same(run("vars x; if (x > 1) { x := 0 } else { x := 5 }", "1/(2 - X)"), cf("3/4*X^5 + 1/4"));
  same(run("vars x, y; if (x = 0 | y >= 2) { x := 7 }", "X*Y"), cf("X*Y"));
  same(run("vars x, y; if (x = 0 | y >= 2) { x := 7 }", "X*Y^2"), cf("X^7*Y^2"));
  same(run("vars x; {x := 1} [1/3] {x := 2}", "1"), cf("X/3 + 2*X^2/3"));
  same(run("params p; vars x; {x := 1} [p] {x := 0}", "1"), cf("1 - p + p*X"));
}

TEST_CASE("loops need invariants") {
  CHECK_THROWS_AS(run("vars x; while (x > 0) { x-- }", "X"), Error);
  syntax::Program p = syntax::desugar(syntax::parse_program("vars x, c; while (x = 1) { {x := 0} [1/2] {c += 1} }"));
  semantics::Semantics sem(p);
  ClosedForm u = sem.unroll(p.body, 2, cf("X"));
  same(u, cf("1/2 + C/4"));
}
