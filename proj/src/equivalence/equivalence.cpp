#include "pgfcheck/equivalence/equivalence.hpp"

#include <algorithm>
#include <chrono>
#include <functional>

#include "pgfcheck/cas/fps.hpp"
#include "pgfcheck/semantics/semantics.hpp"
#include "pgfcheck/syntax/desugar.hpp"

namespace pgfcheck::equivalence {

using cas::Poly;
using semantics::meta_indet;
using semantics::Semantics;
using semantics::var_indet;
using syntax::Program;
using syntax::Stmt;
using syntax::StmtKind;

ClosedForm build_sop(const std::vector<std::string>& vars) {
  Poly den(1);
  for (const auto& v : vars) den *= Poly(1) - Poly::indet(var_indet(v)) * Poly::indet(meta_indet(v));
  return ClosedForm(Poly(1), den);
}

std::string_view to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Equal: return "Equal";
    case Verdict::Kind::NotEqual: return "NotEqual";
    case Verdict::Kind::Error: return "Error";
  }
  return "?";
}

std::string Verdict::conclusion(bool uast_assumed) const {
  if (kind != Kind::Equal) return std::string(to_string(kind));
  if (uast_assumed) return "[[L]] = [[I]] (loop assumed universally almost-surely terminating)";
  return "[[L]] <= [[I]] unconditionally; [[L]] = [[I]] if the loop is universally almost-surely terminating";
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// Lazily extended coefficient lists along one meta indeterminate.
class CoeffCache {
 public:
  CoeffCache(ClosedForm f, cas::Indet u) : f_(std::move(f)), u_(u) {}

  const ClosedForm& at(std::uint32_t i) {
    if (i >= coeffs_.size()) {
      std::uint32_t upto = std::max<std::uint32_t>(i, 2 * static_cast<std::uint32_t>(coeffs_.size()) + 1);
      coeffs_ = cas::cf_coeffs(f_, u_, upto);
    }
    return coeffs_[i];
  }

 private:
  ClosedForm f_;
  cas::Indet u_;
  std::vector<ClosedForm> coeffs_;
};

}  // namespace

std::optional<Counterexample> find_counterexample(const ClosedForm& diff, const std::vector<std::string>& vars_in,
                                                  std::uint32_t degree_bound) {
  if (diff.is_zero()) return std::nullopt;
  std::vector<std::string> vars = vars_in;
  std::sort(vars.begin(), vars.end(), [](const auto& a, const auto& b) { return meta_indet(a) < meta_indet(b); });
  const std::size_t k = vars.size();
  if (k == 0) return Counterexample{{}, diff};

  // caches[prefix] expands the coefficient selected by prefix along the next meta.
  std::map<std::vector<std::uint32_t>, CoeffCache> caches;
  auto coefficient = [&](const std::vector<std::uint32_t>& tau) -> std::optional<ClosedForm> {
    ClosedForm cur = diff;
    std::vector<std::uint32_t> prefix;
    for (std::size_t j = 0; j < k; ++j) {
      auto it = caches.find(prefix);
      if (it == caches.end()) it = caches.emplace(prefix, CoeffCache(cur, meta_indet(vars[j]))).first;
      cur = it->second.at(tau[j]);
      if (cur.is_zero()) return std::nullopt;
      prefix.push_back(tau[j]);
    }
    return cur;
  };

  std::vector<std::uint32_t> tau(k, 0);
  std::optional<Counterexample> found;
  // Exponent vectors of total degree d, larger leading exponents first.
  std::function<bool(std::size_t, std::uint32_t)> walk = [&](std::size_t pos, std::uint32_t remaining) {
    if (pos + 1 == k) {
      tau[pos] = remaining;
      if (auto c = coefficient(tau)) {
        Counterexample cex;
        for (std::size_t j = 0; j < k; ++j) cex.input_state[vars[j]] = tau[j];
        cex.discrepancy = *c;
        found = std::move(cex);
        return true;
      }
      return false;
    }
    for (std::uint32_t e = remaining + 1; e-- > 0;) {
      tau[pos] = e;
      if (walk(pos + 1, remaining - e)) return true;
    }
    return false;
  };
  for (std::uint32_t d = 0; d <= degree_bound; ++d) {
    if (walk(0, d)) return found;
  }
  return std::nullopt;
}

Verdict check_equiv(const CheckRequest& req) {
  auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    Program work = req.decls;
    Stmt loop = syntax::desugar_stmt(req.loop, work);
    if (loop.kind != StmtKind::While) throw Error(ErrorKind::Usage, "check_equiv expects a while loop");
    const Stmt& body = loop.kids[0];
    if (!syntax::loop_free(body)) {
      throw Error(ErrorKind::NotLoopFree, "loop body still contains an unverified loop", req.loop.loc);
    }
    Stmt inv = syntax::desugar_stmt(req.invariant, work);
    if (!syntax::loop_free(inv)) throw Error(ErrorKind::NotLoopFree, "invariant must be loop-free", req.invariant.loc);

    std::vector<std::string> quantified = req.quantified;
    if (quantified.empty()) {
      quantified = work.vars;
      quantified.insert(quantified.end(), work.locals.begin(), work.locals.end());
    }
    ClosedForm g = build_sop(quantified);
    Semantics sem(work);

    // Variables fixed to 0 on entry must stay 0 at every iteration start.
    std::vector<std::string> fixed;
    for (const auto& name : work.all_vars()) {
      if (std::find(quantified.begin(), quantified.end(), name) == quantified.end()) fixed.push_back(name);
    }
    if (!fixed.empty()) {
      ClosedForm after = sem.apply(body, sem.filter(g, loop.guard));
      for (const auto& name : fixed) {
        if (after.contains(var_indet(name))) {
          throw Error(ErrorKind::Usage, "local '" + name + "' may be nonzero when the loop guard is re-evaluated");
        }
      }
    }

    Stmt phi = syntax::compile_guard(loop.guard, Stmt::seq({body, inv}), Stmt::skip());
    ClosedForm lhs = sem.apply(phi, g);
    ClosedForm rhs = sem.apply(inv, g);
    v.phi_sop = lhs;
    v.inv_sop = rhs;
    if (cas::cf_equal(lhs, rhs)) {
      v.kind = Verdict::Kind::Equal;
    } else {
      v.kind = Verdict::Kind::NotEqual;
      v.witness = find_counterexample(lhs - rhs, quantified, req.degree_bound);
      v.bound_exhausted = !v.witness;
    }
  } catch (const Error& e) {
    v.kind = Verdict::Kind::Error;
    v.error_kind = e.kind();
    v.diagnostic = e.what();
  }
  v.ms = elapsed_ms(t0);
  return v;
}

namespace {

std::vector<Stmt*> top_level_items(Stmt& body) {
  std::vector<Stmt*> out;
  if (body.kind == StmtKind::Seq) {
    for (auto& k : body.kids) out.push_back(&k);
  } else {
    out.push_back(&body);
  }
  return out;
}

void collect_params(const Stmt& s, std::vector<std::string>& out) {
  s.prob.collect_params(out);
  s.dist.p.collect_params(out);
  for (const auto& k : s.kids) collect_params(k, out);
  if (s.invariant) collect_params(*s.invariant, out);
}

std::string loop_label(const Stmt& s) {
  return "while@" + std::to_string(s.loc.line) + ":" + std::to_string(s.loc.column);
}

class Verifier {
 public:
  Verifier(const Program& p, const CheckOptions& opts) : prog_(p), opts_(opts) {}

  CompositionalResult run() {
    Program p = attach_spec(prog_);
    std::vector<std::string> all = p.vars;
    all.insert(all.end(), p.locals.begin(), p.locals.end());

    std::vector<Stmt> done;
    bool ok = true;
    bool prefix_known = true;
    for (Stmt* item : top_level_items(p.body)) {
      std::vector<std::string> quantified = all;
      if (item->kind == StmtKind::While && !p.locals.empty() && prefix_known && locals_zero_after(p, done)) {
        quantified = p.vars;
      }
      auto [replaced, item_ok] = process(*item, quantified, all);
      ok = ok && item_ok;
      prefix_known = prefix_known && item_ok;
      done.push_back(std::move(replaced));
    }
    CompositionalResult out;
    out.loops = std::move(reports_);
    if (ok) out.loop_free_body = Stmt::seq(std::move(done));
    return out;
  }

 private:
  bool locals_zero_after(const Program& p, const std::vector<Stmt>& prefix) const {
    if (prefix.empty()) return true;
    Program work = p;
    Stmt core = syntax::desugar_stmt(Stmt::seq(prefix), work);
    ClosedForm out = Semantics(work).apply(core, build_sop(p.vars));
    return std::none_of(p.locals.begin(), p.locals.end(),
                        [&](const std::string& l) { return out.contains(var_indet(l)); });
  }

  std::pair<Stmt, bool> process(const Stmt& s, const std::vector<std::string>& quantified,
                                const std::vector<std::string>& all) {
    if (s.kind == StmtKind::While) {
      auto [body, body_ok] = process(s.kids[0], all, all);
      LoopReport report;
      report.label = loop_label(s);
      collect_params(s, report.parameters);
      if (!body_ok) {
        report.verdict.kind = Verdict::Kind::Error;
        report.verdict.diagnostic = "unverified inner loop";
        reports_.push_back(std::move(report));
        return {s, false};
      }
      if (!s.invariant) {
        report.verdict.kind = Verdict::Kind::Error;
        report.verdict.error_kind = ErrorKind::MissingAnnotation;
        report.verdict.diagnostic = "MissingAnnotation: loop at " + std::to_string(s.loc.line) + ":" +
                                    std::to_string(s.loc.column) + " has no invariant";
        reports_.push_back(std::move(report));
        return {s, false};
      }
      CheckRequest req;
      req.decls = prog_;
      req.loop = Stmt::while_loop(s.guard, body);
      req.loop.loc = s.loc;
      req.invariant = *s.invariant;
      req.uast_assumed = opts_.uast_assumed;
      req.degree_bound = opts_.degree_bound;
      req.quantified = quantified;
      report.verdict = check_equiv(req);
      bool equal = report.verdict.kind == Verdict::Kind::Equal;
      reports_.push_back(std::move(report));
      if (equal) return {*s.invariant, true};
      return {s, false};
    }
    Stmt out = s;
    bool ok = true;
    for (auto& k : out.kids) {
      auto [replaced, kid_ok] = process(k, all, all);
      k = std::move(replaced);
      ok = ok && kid_ok;
    }
    return {out, ok};
  }

  const Program& prog_;
  const CheckOptions& opts_;
  std::vector<LoopReport> reports_;
};

}  // namespace

Program attach_spec(const Program& p) {
  if (!p.spec) return p;
  Program out = p;
  std::vector<Stmt*> loops;
  for (Stmt* item : top_level_items(out.body)) {
    if (item->kind == StmtKind::While) loops.push_back(item);
  }
  if (loops.size() != 1) {
    throw Error(ErrorKind::MissingAnnotation, "an invariant section needs exactly one top-level loop, found " +
                                                  std::to_string(loops.size()));
  }
  if (loops.front()->invariant) {
    throw Error(ErrorKind::Usage, "the top-level loop already carries an inline invariant");
  }
  loops.front()->invariant = std::make_shared<const Stmt>(*out.spec);
  out.spec.reset();
  return out;
}

CompositionalResult verify_compositional(const Program& p, const CheckOptions& opts) {
  return Verifier(p, opts).run();
}

}  // namespace pgfcheck::equivalence

namespace pgfcheck::equivalence {

ClosedForm output_distribution(const Program& p, const ClosedForm& input, const CheckOptions& opts) {
  Stmt body = p.body;
  if (!syntax::loop_free(p.body)) {
    CompositionalResult r = verify_compositional(p, opts);
    if (!r.loop_free_body) {
      for (const auto& l : r.loops) {
        if (l.verdict.kind != Verdict::Kind::Equal) {
          std::string why = l.verdict.diagnostic.empty() ? std::string(to_string(l.verdict.kind)) : l.verdict.diagnostic;
          throw Error(ErrorKind::Usage, "loop " + l.label + " is not verified: " + why);
        }
      }
      throw Error(ErrorKind::Usage, "program loops are not verified");
    }
    body = *r.loop_free_body;
  }
  Program work = p;
  Stmt core = syntax::desugar_stmt(body, work);
  return Semantics(work).apply(core, input);
}

}  // namespace pgfcheck::equivalence
