#include <doctest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "corpus.hpp"
#include "pgfcheck/cas/parse.hpp"
#include "pgfcheck/cli/driver.hpp"
#include "pgfcheck/equivalence/equivalence.hpp"

using namespace pgfcheck;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "pgfcheck");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string prog(const char* name) { return testsupport::program_path(name); }

cas::ClosedForm reparse(const std::string& s) {
  return cas::parse_closed_form(s, [](std::string_view n) -> std::optional<cas::Indet> {
    if (n.rfind("U_", 0) == 0) return cas::Indet::get(n, cas::IndetKind::Meta);
    return cas::Indet::get(n, cas::IndetKind::Program);
  });
}

}  // namespace

TEST_CASE("check exit codes") {
  auto r = run({"check", prog("path_tracing.redip"), "--invariant", prog("path_tracing.spec")});
  CHECK(r.code == 0);
  CHECK(r.out.find("Equal") != std::string::npos);

  r = run({"check", prog("coin_counter_mutated.redip"), "--invariant", prog("coin_counter.spec")});
  CHECK(r.code == 1);
  CHECK(r.out.find("witness input: c=0, n=1") != std::string::npos);

  r = run({"check", prog("pi.redip")});
  CHECK(r.code == 2);
  CHECK(r.err.find("NonRectangularGuard") != std::string::npos);

  r = run({"check", prog("catalan.redip")});
  CHECK(r.code == 2);
  CHECK(r.err.find("algebraic PGF unsupported") != std::string::npos);

  CHECK(run({"check", prog("nested.redip")}).code == 2);
  CHECK(run({"check", "/nonexistent.redip"}).code == 2);
  CHECK(run({"check"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("json verdicts round-trip") {
  auto r = run({"check", prog("coin_counter_mutated.redip"), "--invariant", prog("coin_counter.spec"), "--format", "json"});
  REQUIRE(r.code == 1);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "NotEqual");
  auto loop = j["loops"][0];
  CHECK(loop["witness_state"]["n"] == 1);
  auto disc = reparse(loop["discrepancy"].get<std::string>());
  CHECK(cas::cf_equal(disc, reparse("(C - 1)/(3*(2 - C))")));
  CHECK(reparse(loop["closed_form"].get<std::string>()).to_string() == loop["closed_form"]);

  r = run({"check", prog("coin_counter.redip"), "--invariant", prog("coin_counter.spec"), "--format", "json"});
  j = nlohmann::json::parse(r.out);
  CHECK(cas::cf_equal(reparse(j["loops"][0]["closed_form"].get<std::string>()),
                      reparse("(2 - C)/((1 - C*U_C)*(2 - C - U_N))")));
}

TEST_CASE("queries and expansion") {
  auto r = run({"query", prog("binomials.redip"), "--input", "C^10", "--q", "P[m>7 & n<3]"});
  CHECK(r.out == "7/128\n");
  r = run({"query", prog("binomials.redip"), "--input", "C^10", "--q", "E[m^3+2*m*n+n^2]"});
  CHECK(r.out == "235\n");
  r = run({"query", prog("knuth_yao.redip"), "--q", "mass"});
  CHECK(r.out == "1\n");
  r = run({"query", prog("knuth_yao.redip"), "--q", "P[die=3]"});
  CHECK(r.out == "1/6\n");
  r = run({"query", prog("cowboys.redip"), "--input", "c~dirac(1)", "--q", "P[t=0]", "--param", "a=1/2,b=1/3"});
  CHECK(r.out == "3/4\n");
  r = run({"query", prog("binomials.redip"), "--input", "c=10", "--q", "P[m>7 & n<3]"});
  CHECK(r.out == "7/128\n");
  r = run({"query", prog("binomials.redip"), "--input", "C^10", "--q", "E[q]"});
  CHECK(r.code == 2);

  r = run({"expand", prog("binomials.redip"), "--input", "C^2", "--degree", "2"});
  CHECK(r.out == "1/4*M^2 + 1/2*M*N + 1/4*N^2\n");
  r = run({"expand", prog("coin_counter.redip"), "--invariant", prog("coin_counter.spec"), "--input", "N", "--degree", "3"});
  CHECK(r.out == "1/2 + 1/4*C + 1/8*C^2 + 1/16*C^3\n");
  r = run({"expand", prog("iid_same.redip"), "--input", "X"});
  CHECK(r.code == 2);
}

TEST_CASE("sampling and parsing") {
  auto r = run({"sample", prog("binomials.redip"), "--input", "c=10", "--event", "m>7 & n<3", "--samples", "1000",
                "--seed", "5", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["rng"] == "mt19937_64");
  CHECK(j["samples"] == 1000);
  auto again = run({"sample", prog("binomials.redip"), "--input", "C^10", "--event", "m>7 & n<3", "--samples", "1000",
                    "--seed", "5", "--format", "json"});
  CHECK(again.out == r.out);
  CHECK(run({"sample", prog("cowboys.redip"), "--input", "c=1"}).code == 2);

  r = run({"parse", prog("cowboys.redip")});
  REQUIRE(r.code == 0);
  CHECK(syntax::parse_program(r.out) == testsupport::load("cowboys.redip"));
}
