#include <doctest.h>

#include "corpus.hpp"
#include "generators.hpp"
#include "pgfcheck/cas/fps.hpp"
#include "pgfcheck/cas/parse.hpp"
#include "pgfcheck/equivalence/equivalence.hpp"
#include "pgfcheck/queries/queries.hpp"
#include "pgfcheck/semantics/semantics.hpp"
#include "pgfcheck/syntax/desugar.hpp"
#include "pgfcheck/syntax/parser.hpp"
#include "pgfcheck/syntax/printer.hpp"

using namespace pgfcheck;
using cas::ClosedForm;
using cas::Coeff;
using cas::Indet;
using cas::Poly;
using testsupport::Gen;

namespace {

constexpr int kCases = 200;
constexpr std::uint32_t kSeriesDegree = 8;

const Indet X = semantics::var_indet("x");
const Indet Y = semantics::var_indet("y");
const Indet UX = semantics::meta_indet("x");
const Indet UY = semantics::meta_indet("y");

ClosedForm cf(const std::string& s) {
  return cas::parse_closed_form(s, [](std::string_view n) -> std::optional<Indet> {
    if (n == "X") return X;
    if (n == "Y") return Y;
    if (n == "U_X") return UX;
    if (n == "U_Y") return UY;
    return std::nullopt;
  });
}

struct Case {
  std::string source;
  syntax::Program core;

  ClosedForm apply(const ClosedForm& g) const { return semantics::Semantics(core).apply(core.body, g); }
};

Case random_case(Gen& gen) {
  std::string src = gen.program();
  return {src, syntax::desugar(syntax::parse_program(src))};
}

const syntax::Program& xy_decls() {
  static const syntax::Program p = syntax::parse_program("vars x, y;\nskip\n");
  return p;
}

syntax::Guard random_guard(Gen& gen) { return syntax::parse_guard(gen.guard(3), xy_decls()); }

Coeff rational(const queries::QueryResult& r) {
  REQUIRE_FALSE(r.infinite);
  auto q = r.value.as_rational();
  REQUIRE(q.has_value());
  return *q;
}

Coeff rational(const ClosedForm& f) {
  auto q = f.as_rational();
  REQUIRE(q.has_value());
  return *q;
}

const cas::DegreeBounds kBounds = {{X, kSeriesDegree}, {Y, kSeriesDegree}};

Poly truncate_xy(const Poly& p, std::uint32_t dx = kSeriesDegree, std::uint32_t dy = kSeriesDegree) {
  return p.truncated(X, dx).truncated(Y, dy);
}

}  // namespace

TEST_CASE("loop-free programs preserve mass") {
  Gen gen(101);
  for (int i = 0; i < kCases; ++i) {
    Case c = random_case(gen);
    std::string in = gen.input();
    CAPTURE(c.source);
    CAPTURE(in);
    CHECK(rational(queries::mass(c.apply(cf(in)))) == 1);
  }
}

TEST_CASE("semantics is linear on mixtures") {
  Gen gen(202);
  for (int i = 0; i < kCases; ++i) {
    Case c = random_case(gen);
    ClosedForm g1 = cf(gen.input());
    ClosedForm g2 = cf(gen.input());
    ClosedForm w = cf(gen.prob());
    ClosedForm mix = w * g1 + (ClosedForm(1) - w) * g2;
    CAPTURE(c.source);
    CHECK(cas::cf_equal(c.apply(mix), w * c.apply(g1) + (ClosedForm(1) - w) * c.apply(g2)));
  }
}

TEST_CASE("guard and its negation partition the mass") {
  Gen gen(303);
  semantics::Semantics sem(xy_decls());
  for (int i = 0; i < kCases; ++i) {
    syntax::Guard phi = random_guard(gen);
    syntax::Guard neg = syntax::Guard::negate(phi);
    ClosedForm g = cf(gen.input());
    CAPTURE(g.to_string());
    CHECK(cas::cf_equal(sem.filter(g, phi) + sem.filter(g, neg), g));
    Coeff total = rational(queries::prob_event(g, phi, xy_decls())) + rational(queries::prob_event(g, neg, xy_decls()));
    CHECK(total == rational(queries::mass(g)));
  }
}

TEST_CASE("semantics is homogeneous in meta indeterminates") {
  Gen gen(404);
  for (int i = 0; i < kCases; ++i) {
    Case c = random_case(gen);
    ClosedForm g = cf(gen.input());
    ClosedForm m = Poly::indet(UX, gen.uniform(0, 3)) * Poly::indet(UY, gen.uniform(0, 3));
    CAPTURE(c.source);
    CHECK(cas::cf_equal(c.apply(m * g), m * c.apply(g)));
  }
}

TEST_CASE("universal input agrees with point masses") {
  Gen gen(505);
  ClosedForm sop = equivalence::build_sop({"x", "y"});
  for (int i = 0; i < kCases / 4; ++i) {
    Case c = random_case(gen);
    ClosedForm on_sop = c.apply(sop);
    for (int j = 0; j < 4; ++j) {
      std::uint32_t a = gen.uniform(0, 3);
      std::uint32_t b = gen.uniform(0, 3);
      ClosedForm coeff = cas::cf_coeff(cas::cf_coeff(on_sop, UX, a), UY, b);
      ClosedForm point = c.apply(Poly::indet(X, a) * Poly::indet(Y, b));
      CAPTURE(c.source);
      CAPTURE(a);
      CAPTURE(b);
      CHECK(cas::cf_equal(coeff, point));
    }
  }
}

TEST_CASE("outputs mention no placeholder, temporary or fresh meta") {
  Gen gen(606);
  for (int i = 0; i < kCases; ++i) {
    Case c = random_case(gen);
    ClosedForm g = cf(gen.input()) * Poly::indet(UX, gen.uniform(0, 2));
    ClosedForm out = c.apply(g);
    CAPTURE(c.source);
    for (Indet v : out.indets()) {
      CAPTURE(v.name());
      bool allowed = v == X || v == Y || v == UX;
      CHECK(allowed);
    }
  }
}

TEST_CASE("truncated coefficients are nonnegative and bounded by the mass") {
  Gen gen(707);
  for (int i = 0; i < kCases; ++i) {
    Case c = random_case(gen);
    ClosedForm out = c.apply(cf(gen.input()));
    Poly t = cas::taylor(out, kBounds);
    Coeff sum = 0;
    bool nonneg = true;
    for (const auto& [m, k] : t.terms()) {
      nonneg = nonneg && k >= 0;
      sum += k;
    }
    CAPTURE(c.source);
    CHECK(nonneg);
    CHECK(sum <= rational(queries::mass(out)));
  }
}

TEST_CASE("expectation is linear and variance nonnegative") {
  Gen gen(808);
  for (int i = 0; i < kCases; ++i) {
    Case c = random_case(gen);
    ClosedForm out = c.apply(cf(gen.input()));
    long a = gen.uniform(0, 3);
    long b = gen.uniform(0, 3);
    Poly expr = Poly::indet(X).scaled(a) + Poly::indet(Y).scaled(b) + Poly(1);
    Coeff lhs = rational(queries::expectation(out, expr));
    Coeff rhs = a * rational(queries::expectation(out, Poly::indet(X))) +
                b * rational(queries::expectation(out, Poly::indet(Y))) + 1;
    CAPTURE(c.source);
    CHECK(lhs == rhs);
    CHECK(rational(queries::variance(out, X)) >= 0);
    CHECK(rational(queries::variance(out, Y)) >= 0);
  }
}

TEST_CASE("series of sums, products and derivatives agree to degree 8") {
  Gen gen(909);
  for (int i = 0; i < kCases; ++i) {
    ClosedForm f = cf(gen.input());
    ClosedForm g = cf(gen.input());
    if (gen.coin()) f = random_case(gen).apply(f);
    Poly tf = cas::taylor(f, kBounds);
    Poly tg = cas::taylor(g, kBounds);
    CAPTURE(f.to_string());
    CAPTURE(g.to_string());
    CHECK(cas::taylor(f + g, kBounds) == tf + tg);
    CHECK(cas::taylor(f * g, kBounds) == truncate_xy(tf * tg));
    // the x^8 coefficient of f' needs x^9 of f, so compare below that
    CHECK(truncate_xy(cas::taylor(cas::cf_derivative(f, X), kBounds), kSeriesDegree - 1) ==
          truncate_xy(tf.derivative(X), kSeriesDegree - 1));
    auto cs = cas::cf_coeffs(f, X, kSeriesDegree);
    for (std::uint32_t e = 0; e <= kSeriesDegree; ++e) {
      Poly slice = cas::taylor(cs[e], {{Y, kSeriesDegree}});
      Poly below = e == 0 ? Poly() : tf.truncated(X, e - 1);
      CHECK(slice.times_monomial(cas::ExpVec(X, e)) == tf.truncated(X, e) - below);
    }
  }
}

TEST_CASE("Kleene iterates of the coin counter loop increase towards the invariant") {
  auto prog = syntax::desugar(testsupport::load_with_spec("coin_counter.redip", "coin_counter.spec"));
  syntax::Program spec_prog = testsupport::load_with_spec("coin_counter.redip", "coin_counter.spec");
  syntax::Program inv_core = spec_prog;
  inv_core.body = *spec_prog.spec;
  inv_core.spec.reset();
  inv_core = syntax::desugar(inv_core);
  semantics::Semantics sem(prog);
  const syntax::Stmt& loop = prog.body;
  REQUIRE(loop.kind == syntax::StmtKind::While);
  Indet N = semantics::var_indet("n");
  Indet C = semantics::var_indet("c");
  cas::DegreeBounds bounds = {{N, kSeriesDegree}, {C, kSeriesDegree}};
  auto nonneg = [](const Poly& p) {
    for (const auto& [m, k] : p.terms()) {
      if (k < 0) return false;
    }
    return true;
  };
  int cases = 0;
  for (std::uint32_t n = 0; n <= 3; ++n) {
    for (std::uint32_t c0 = 0; c0 <= 1; ++c0) {
      ClosedForm g = Poly::indet(N, n) * Poly::indet(C, c0);
      Poly inv = cas::taylor(semantics::Semantics(inv_core).apply(inv_core.body, g), bounds);
      Poly prev = cas::taylor(sem.unroll(loop, 0, g), bounds);
      for (std::uint32_t k = 1; k <= 30; ++k, ++cases) {
        Poly cur = cas::taylor(sem.unroll(loop, k, g), bounds);
        CAPTURE(n);
        CAPTURE(k);
        CHECK(nonneg(cur - prev));
        CHECK(nonneg(inv - cur));
        prev = cur;
      }
    }
  }
  CHECK(cases >= 200);
}

TEST_CASE("counterexamples reproduce on their point-mass input") {
  Gen gen(1111);
  syntax::Program decls = testsupport::load("coin_counter.redip");
  int not_equal = 0;
  for (int i = 0; i < kCases; ++i) {
    std::string q = gen.prob();
    syntax::Program with = decls;
    with.spec = syntax::parse_spec("c += iid(geometric(" + q + "), n);\nn := 0\n", with);
    equivalence::CheckRequest req{decls, decls.body, *with.spec};
    auto v = equivalence::check_equiv(req);
    CAPTURE(q);
    if (*cas::parse_rational(q) == Coeff(1, 2)) {
      CHECK(v.kind == equivalence::Verdict::Kind::Equal);
      continue;
    }
    REQUIRE(v.kind == equivalence::Verdict::Kind::NotEqual);
    REQUIRE(v.witness.has_value());
    ++not_equal;
    Poly point(1);
    for (const auto& [var, e] : v.witness->input_state) point = point * Poly::indet(semantics::var_indet(var), e);
    syntax::Program inv = with;
    inv.body = *with.spec;
    inv.spec.reset();
    inv = syntax::desugar(inv);
    // one unrolling step followed by the invariant
    syntax::Program step = decls;
    step.body = syntax::Stmt::if_else(decls.body.guard, syntax::Stmt::seq({decls.body.kids.at(0), *with.spec}),
                                      syntax::Stmt::skip());
    step = syntax::desugar(step);
    ClosedForm lhs = semantics::Semantics(step).apply(step.body, point);
    ClosedForm rhs = semantics::Semantics(inv).apply(inv.body, point);
    CHECK(cas::cf_equal(lhs - rhs, v.witness->discrepancy));
    CHECK_FALSE(v.witness->discrepancy.is_zero());
  }
  CHECK(not_equal > 0);
}
