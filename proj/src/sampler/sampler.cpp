#include "pgfcheck/sampler/sampler.hpp"

#include <cmath>

namespace pgfcheck::sampler {

using cas::Coeff;
using syntax::Dist;
using syntax::Guard;
using syntax::ParamExpr;
using syntax::Rel;
using syntax::Stmt;
using syntax::StmtKind;

namespace {

// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Inverse transform over a mass function given by successive ratios.
template <typename Pmf>
std::uint64_t invert(double u, Pmf pmf, std::uint64_t support_end) {
  double cdf = 0;
  for (std::uint64_t k = 0; k < support_end; ++k) {
    cdf += pmf(k);
    if (u < cdf) return k;
  }
  return support_end == 0 ? 0 : support_end - 1;
}

}  // namespace

struct Sampler::Ctx {
  ConcreteState state;
  std::mt19937_64& rng;
  std::uint64_t steps = 0;
  std::uint64_t cap;
  bool timeout = false;
};

Sampler::Sampler(const syntax::Program& p, std::map<std::string, Coeff> params)
    : prog_(p), params_(std::move(params)) {
  for (const auto& name : p.params) {
    if (!params_.count(name)) throw Error(ErrorKind::UnboundParameter, "parameter '" + name + "' needs a value");
  }
}

Coeff Sampler::value(const ParamExpr& e) const {
  using K = ParamExpr::Kind;
  switch (e.kind) {
    case K::Num: return e.value;
    case K::Param: {
      auto it = params_.find(e.name);
      if (it == params_.end()) throw Error(ErrorKind::UnboundParameter, "parameter '" + e.name + "' needs a value");
      return it->second;
    }
    case K::Neg: return -value(e.args[0]);
    case K::Add: return value(e.args[0]) + value(e.args[1]);
    case K::Sub: return value(e.args[0]) - value(e.args[1]);
    case K::Mul: return value(e.args[0]) * value(e.args[1]);
    case K::Div: {
      Coeff d = value(e.args[1]);
      if (d == 0) throw Error(ErrorKind::InvalidParameter, "probability divides by zero");
      return value(e.args[0]) / d;
    }
  }
  return 0;
}

double Sampler::probability(const ParamExpr& e) const {
  Coeff v = value(e);
  if (v < 0 || v > 1) throw Error(ErrorKind::InvalidParameter, "probability " + cas::coeff_to_string(v) + " out of range");
  return v.get_d();
}

std::uint64_t Sampler::sample(const Dist& d, std::mt19937_64& rng) const {
  double u = unit(rng);
  switch (d.kind) {
    case Dist::Kind::Dirac: return d.a;
    case Dist::Kind::Bernoulli: return u < probability(d.p) ? 1 : 0;
    case Dist::Kind::Uniform: {
      double w = 1.0 / d.a;
      return invert(u, [w](std::uint64_t) { return w; }, d.a);
    }
    case Dist::Kind::UniformRange: {
      double w = 1.0 / (d.b - d.a + 1);
      return d.a + invert(u, [w](std::uint64_t) { return w; }, d.b - d.a + 1);
    }
    case Dist::Kind::Geometric: {
      double p = probability(d.p);
      if (p >= 1) throw Error(ErrorKind::InvalidParameter, "geometric parameter must be below 1");
      double mass = 1 - p;
      return invert(u, [&](std::uint64_t k) { return k == 0 ? mass : mass *= p; }, UINT64_MAX);
    }
    case Dist::Kind::Binomial: {
      double p = probability(d.p);
      std::uint32_t n = d.a;
      double mass = std::pow(1 - p, n);
      return invert(
          u,
          [&](std::uint64_t k) {
            if (k > 0) mass = (p == 1) ? (k == n ? 1.0 : 0.0) : mass * p / (1 - p) * (n - k + 1) / k;
            return mass;
          },
          n + 1);
    }
    case Dist::Kind::NBinomial: {
      double p = probability(d.p);
      if (p >= 1) throw Error(ErrorKind::InvalidParameter, "negative binomial parameter must be below 1");
      std::uint32_t n = d.a;
      double mass = std::pow(1 - p, n);
      return invert(
          u,
          [&](std::uint64_t k) {
            if (k > 0) mass = mass * p * (n + k - 1) / k;
            return mass;
          },
          n == 0 ? 1 : UINT64_MAX);
    }
  }
  return 0;
}

bool Sampler::holds(const Guard& g, const ConcreteState& s) const {
  using K = Guard::Kind;
  switch (g.kind) {
    case K::True: return true;
    case K::False: return false;
    case K::Not: return !holds(g.args[0], s);
    case K::And: return holds(g.args[0], s) && holds(g.args[1], s);
    case K::Or: return holds(g.args[0], s) || holds(g.args[1], s);
    case K::Atom: break;
  }
  auto it = s.find(g.var);
  std::uint64_t v = it == s.end() ? 0 : it->second;
  switch (g.rel) {
    case Rel::Lt: return v < g.n;
    case Rel::Le: return v <= g.n;
    case Rel::Eq: return v == g.n;
    case Rel::Gt: return v > g.n;
    case Rel::Ge: return v >= g.n;
  }
  return false;
}

void Sampler::exec(const Stmt& s, Ctx& ctx) const {
  if (ctx.timeout) return;
  auto& st = ctx.state;
  auto iid_sum = [&](const Dist& d, std::uint64_t count) {
    std::uint64_t total = 0;
    for (std::uint64_t i = 0; i < count; ++i) total += sample(d, ctx.rng);
    return total;
  };
  auto subtract = [&](std::uint64_t a, std::uint64_t b) {
    if (b > a) throw Error(ErrorKind::NegativeValue, "'" + s.x + "' would become negative", s.loc);
    return a - b;
  };
  switch (s.kind) {
    case StmtKind::Skip: return;
    case StmtKind::AssignConst: st[s.x] = s.n; return;
    case StmtKind::Decr: st[s.x] = st[s.x] > s.n ? st[s.x] - s.n : 0; return;
    case StmtKind::IidIncr: st[s.x] += iid_sum(s.dist, st[s.y] * s.n); return;
    case StmtKind::SubVar: st[s.x] = subtract(st[s.x], st[s.y] * s.n); return;
    case StmtKind::AssignVar: st[s.x] = st[s.y]; return;
    case StmtKind::IncrVar: st[s.x] += st[s.y]; return;
    case StmtKind::IncrConst: st[s.x] += s.n; return;
    case StmtKind::AssignDist: st[s.x] = sample(s.dist, ctx.rng); return;
    case StmtKind::IncrDist: st[s.x] += sample(s.dist, ctx.rng); return;
    case StmtKind::AssignIid: {
      std::uint64_t total = iid_sum(s.dist, st[s.y] * s.n);
      st[s.x] = total;
      return;
    }
    case StmtKind::Affine: {
      std::uint64_t pos = 0;
      std::uint64_t neg = 0;
      for (const auto& [v, k] : s.affine.coef) {
        std::uint64_t val = st[v];
        (k > 0 ? pos : neg) += val * static_cast<std::uint64_t>(k > 0 ? k : -k);
      }
      if (s.affine.constant > 0) pos += static_cast<std::uint64_t>(s.affine.constant);
      std::uint64_t r = subtract(pos, neg);
      std::uint64_t dec = s.affine.constant < 0 ? static_cast<std::uint64_t>(-s.affine.constant) : 0;
      st[s.x] = r > dec ? r - dec : 0;
      return;
    }
    case StmtKind::IfElse: exec(s.kids[holds(s.guard, st) ? 0 : 1], ctx); return;
    case StmtKind::PChoice: exec(s.kids[unit(ctx.rng) < probability(s.prob) ? 0 : 1], ctx); return;
    case StmtKind::Seq:
      for (const auto& k : s.kids) {
        exec(k, ctx);
        if (ctx.timeout) return;
      }
      return;
    case StmtKind::While:
      while (holds(s.guard, st)) {
        if (++ctx.steps > ctx.cap) {
          ctx.timeout = true;
          return;
        }
        exec(s.kids[0], ctx);
        if (ctx.timeout) return;
      }
      return;
    case StmtKind::Switch: {
      std::uint64_t v = st[s.x];
      for (std::size_t i = 0; i < s.labels.size(); ++i) {
        if (v == s.labels[i]) {
          exec(s.kids[i], ctx);
          return;
        }
      }
      exec(s.kids.back(), ctx);
      return;
    }
    case StmtKind::Repeat:
      for (std::uint32_t i = 0; i < s.n && !ctx.timeout; ++i) exec(s.kids[0], ctx);
      return;
  }
}

RunResult Sampler::run(const ConcreteState& init, std::mt19937_64& rng, std::uint64_t step_cap) const {
  Ctx ctx{{}, rng, 0, step_cap, false};
  for (const auto& v : prog_.all_vars()) ctx.state[v] = 0;
  for (const auto& [v, val] : init) {
    if (!prog_.declares_var(v)) throw Error(ErrorKind::UndeclaredVariable, "undeclared variable '" + v + "'");
    ctx.state[v] = val;
  }
  exec(prog_.body, ctx);
  return RunResult{ctx.timeout, std::move(ctx.state)};
}

namespace {

void check_timeouts(std::uint64_t timeouts, std::uint64_t n) {
  if (timeouts * 100 > n) {
    throw Error(ErrorKind::TimeoutFractionExceeded,
                std::to_string(timeouts) + " of " + std::to_string(n) + " runs hit the step cap");
  }
}

}  // namespace

Estimate estimate(const syntax::Program& p, const ConcreteState& init, const Guard& event, std::uint64_t n_samples,
                  std::uint64_t seed, const std::map<std::string, Coeff>& params, std::uint64_t step_cap) {
  Sampler s(p, params);
  std::mt19937_64 rng(seed);
  Estimate e;
  e.samples = n_samples;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    RunResult r = s.run(init, rng, step_cap);
    if (r.timeout) ++e.timeouts;
    else if (s.holds(event, r.state)) ++e.hits;
  }
  check_timeouts(e.timeouts, n_samples);
  if (n_samples > 0) {
    e.frequency = static_cast<double>(e.hits) / static_cast<double>(n_samples);
    e.std_error = std::sqrt(e.frequency * (1 - e.frequency) / static_cast<double>(n_samples));
  }
  return e;
}

Histogram histogram(const syntax::Program& p, const ConcreteState& init, std::uint64_t n_samples, std::uint64_t seed,
                    const std::map<std::string, Coeff>& params, std::uint64_t step_cap) {
  Sampler s(p, params);
  std::mt19937_64 rng(seed);
  Histogram h;
  h.samples = n_samples;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    RunResult r = s.run(init, rng, step_cap);
    if (r.timeout) ++h.timeouts;
    else ++h.counts[r.state];
  }
  check_timeouts(h.timeouts, n_samples);
  return h;
}

}  // namespace pgfcheck::sampler
