#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "pgfcheck/cas/poly.hpp"
#include "pgfcheck/syntax/ast.hpp"

namespace pgfcheck::sampler {

/// Variable name to value. Variables that are not listed start at 0.
using ConcreteState = std::map<std::string, std::uint64_t>;

/// Generator behind every sampling routine.
inline constexpr const char* kRngAlgorithm = "mt19937_64";

inline constexpr std::uint64_t kDefaultStepCap = 1'000'000;

struct RunResult {
  bool timeout = false;
  ConcreteState state;
};

/// Concrete interpreter of surface programs. Parameters must be bound to
/// rationals (UnboundParameter otherwise).
class Sampler {
 public:
  Sampler(const syntax::Program& p, std::map<std::string, cas::Coeff> params = {});

  /// One run from init. Stops with timeout after step_cap loop iterations.
  /// Throws NegativeValue when an exact subtraction would go below 0.
  RunResult run(const ConcreteState& init, std::mt19937_64& rng, std::uint64_t step_cap = kDefaultStepCap) const;

  bool holds(const syntax::Guard& g, const ConcreteState& s) const;

 private:
  struct Ctx;
  void exec(const syntax::Stmt& s, Ctx& ctx) const;
  std::uint64_t sample(const syntax::Dist& d, std::mt19937_64& rng) const;
  double probability(const syntax::ParamExpr& e) const;
  cas::Coeff value(const syntax::ParamExpr& e) const;

  const syntax::Program& prog_;
  std::map<std::string, cas::Coeff> params_;
};

struct Estimate {
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  std::uint64_t timeouts = 0;
  double frequency = 0;
  double std_error = 0;
};

/// Frequency of `event` among n_samples runs (timeouts count as misses).
/// Throws TimeoutFractionExceeded if more than 1% of runs time out.
Estimate estimate(const syntax::Program& p, const ConcreteState& init, const syntax::Guard& event,
                  std::uint64_t n_samples, std::uint64_t seed, const std::map<std::string, cas::Coeff>& params = {},
                  std::uint64_t step_cap = kDefaultStepCap);

/// Final-state histogram of n_samples runs; timeouts are counted separately.
struct Histogram {
  std::map<ConcreteState, std::uint64_t> counts;
  std::uint64_t samples = 0;
  std::uint64_t timeouts = 0;
};

Histogram histogram(const syntax::Program& p, const ConcreteState& init, std::uint64_t n_samples, std::uint64_t seed,
                    const std::map<std::string, cas::Coeff>& params = {}, std::uint64_t step_cap = kDefaultStepCap);

}  // namespace pgfcheck::sampler
