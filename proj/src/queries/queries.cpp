#include "pgfcheck/queries/queries.hpp"

#include <algorithm>
#include <cctype>

#include "pgfcheck/cas/fps.hpp"
#include "pgfcheck/cas/parse.hpp"
#include "pgfcheck/semantics/semantics.hpp"
#include "pgfcheck/syntax/parser.hpp"

namespace pgfcheck::queries {

using cas::Coeff;
using cas::IndetKind;
using cas::Poly;

std::string QueryResult::to_string() const {
  if (infinite) return "inf";
  if (auto r = value.as_rational()) return cas::coeff_to_string(*r);
  return value.to_string();
}

namespace {

std::vector<Indet> program_indets(const ClosedForm& f) {
  std::vector<Indet> out;
  for (Indet x : f.indets()) {
    if (x.kind() == IndetKind::Program) out.push_back(x);
  }
  return out;
}

// Stirling numbers of the second kind S(n, 0..n).
std::vector<Coeff> stirling2(std::uint32_t n) {
  std::vector<Coeff> row{1};
  for (std::uint32_t i = 1; i <= n; ++i) {
    std::vector<Coeff> next(i + 1, Coeff(0));
    for (std::uint32_t k = 1; k <= i; ++k) {
      next[k] = (k < row.size() ? Coeff(row[k] * Coeff(k)) : Coeff(0)) + row[k - 1];
    }
    row = std::move(next);
  }
  return row;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_commas(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

QueryResult eval_at_one(const ClosedForm& f) {
  Poly num = f.num();
  Poly den = f.den();
  for (Indet x : program_indets(f)) {
    if (cas::eval_at_one_raw(num, den, x) == cas::EvalOutcome::Diverges) return QueryResult::infinity();
  }
  if (num.is_zero()) return QueryResult::finite(ClosedForm());
  try {
    return QueryResult::finite(ClosedForm(num, den));
  } catch (const Error&) {
    throw Error(ErrorKind::IllDefinedProjection, "evaluation at 1 is not a power series");
  }
}

QueryResult mass(const ClosedForm& g) { return eval_at_one(g); }

QueryResult factorial_moment(const ClosedForm& g, const std::vector<std::pair<Indet, std::uint32_t>>& orders) {
  ClosedForm d = g;
  for (const auto& [x, k] : orders) {
    for (std::uint32_t i = 0; i < k; ++i) d = cas::cf_derivative(d, x);
  }
  return eval_at_one(d);
}

QueryResult expectation(const ClosedForm& g, const Poly& expr) {
  std::map<std::vector<std::pair<Indet, std::uint32_t>>, QueryResult> moments;
  auto moment = [&](const std::vector<std::pair<Indet, std::uint32_t>>& key) -> const QueryResult& {
    auto it = moments.find(key);
    if (it == moments.end()) it = moments.emplace(key, factorial_moment(g, key)).first;
    return it->second;
  };

  ClosedForm total;
  bool plus_inf = false;
  bool minus_inf = false;
  for (const auto& [mono, c] : expr.terms()) {
    // x^a = sum_k S(a, k) x^(k), expanded over every variable of the monomial
    std::vector<std::pair<std::vector<std::pair<Indet, std::uint32_t>>, Coeff>> parts{{{}, c}};
    for (const auto& [x, a] : mono.entries()) {
      if (x.kind() != IndetKind::Program) {
        throw Error(ErrorKind::QuerySyntax, "expectation expression may only mention program variables");
      }
      auto s = stirling2(a);
      std::vector<std::pair<std::vector<std::pair<Indet, std::uint32_t>>, Coeff>> next;
      for (const auto& [key, w] : parts) {
        for (std::uint32_t k = 1; k <= a; ++k) {
          if (s[k] == 0) continue;
          auto extended = key;
          extended.emplace_back(x, k);
          next.emplace_back(std::move(extended), w * s[k]);
        }
      }
      parts = std::move(next);
    }
    for (const auto& [key, w] : parts) {
      const QueryResult& m = moment(key);
      if (m.infinite) {
        (w > 0 ? plus_inf : minus_inf) = true;
      } else {
        total = total + m.value.scaled(w);
      }
    }
  }
  if (plus_inf && minus_inf) throw Error(ErrorKind::IndeterminateForm, "expectation has the form inf - inf");
  if (plus_inf) return QueryResult::infinity();
  if (minus_inf) throw Error(ErrorKind::IndeterminateForm, "expectation diverges to -inf");
  return QueryResult::finite(total);
}

QueryResult variance(const ClosedForm& g, Indet x) {
  QueryResult mean = factorial_moment(g, {{x, 1}});
  if (mean.infinite) throw Error(ErrorKind::IndeterminateForm, "variance of a variable with infinite mean");
  QueryResult second = factorial_moment(g, {{x, 2}});
  if (second.infinite) return QueryResult::infinity();
  return QueryResult::finite(second.value + mean.value - mean.value * mean.value);
}

QueryResult prob_event(const ClosedForm& g, const syntax::Guard& event, const syntax::Program& decls) {
  return mass(semantics::Semantics(decls).filter(g, event));
}

ClosedForm marginal(const ClosedForm& g, const std::vector<Indet>& keep) {
  ClosedForm out = g;
  for (Indet x : program_indets(g)) {
    if (std::find(keep.begin(), keep.end(), x) == keep.end()) out = cas::cf_eval_at(out, x, 1);
  }
  return out;
}

QueryResult coeff_state(const ClosedForm& g, const std::map<Indet, std::uint32_t>& state) {
  ClosedForm out = g;
  for (const auto& [x, e] : state) out = cas::cf_coeff(out, x, e);
  for (Indet x : program_indets(out)) out = cas::cf_eval_at(out, x, 0);
  return QueryResult::finite(out);
}

Query parse_query(std::string_view text_in, const syntax::Program& decls) {
  std::string text = trim(text_in);
  Query q;
  if (text == "mass") return q;
  auto open = text.find('[');
  if (open == std::string::npos || text.back() != ']') {
    throw Error(ErrorKind::QuerySyntax, "expected mass, E[...], Var[...], P[...], marginal[...] or coeff[...]");
  }
  std::string head = trim(std::string_view(text).substr(0, open));
  std::string arg = text.substr(open + 1, text.size() - open - 2);

  auto variable = [&](const std::string& name) {
    if (!decls.declares_var(name)) throw Error(ErrorKind::QuerySyntax, "unknown variable '" + name + "' in query");
    return semantics::var_indet(name);
  };

  if (head == "E") {
    q.kind = Query::Kind::Expectation;
    ClosedForm e = cas::parse_closed_form(arg, [&](std::string_view n) -> std::optional<Indet> {
      if (decls.declares_var(std::string(n))) return semantics::var_indet(std::string(n));
      return std::nullopt;
    });
    if (!e.is_polynomial()) throw Error(ErrorKind::QuerySyntax, "expectation needs a polynomial expression");
    q.expr = e.num().scaled(1 / e.den().constant_term());
    return q;
  }
  if (head == "Var") {
    q.kind = Query::Kind::Variance;
    q.var = variable(trim(arg));
    return q;
  }
  if (head == "P") {
    q.kind = Query::Kind::Probability;
    q.event = syntax::parse_guard(arg, decls);
    return q;
  }
  if (head == "marginal") {
    q.kind = Query::Kind::Marginal;
    for (const auto& name : split_commas(arg)) {
      if (!name.empty()) q.keep.push_back(variable(name));
    }
    return q;
  }
  if (head == "coeff") {
    q.kind = Query::Kind::Coefficient;
    for (const auto& item : split_commas(arg)) {
      if (item.empty()) continue;
      auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::QuerySyntax, "expected var=value in '" + item + "'");
      std::string value = trim(std::string_view(item).substr(eq + 1));
      if (value.empty() || !std::all_of(value.begin(), value.end(), [](unsigned char c) { return std::isdigit(c); }) ||
          value.size() > 9) {
        throw Error(ErrorKind::QuerySyntax, "expected a natural number in '" + item + "'");
      }
      q.state[variable(trim(std::string_view(item).substr(0, eq)))] = static_cast<std::uint32_t>(std::stoul(value));
    }
    return q;
  }
  throw Error(ErrorKind::QuerySyntax, "unknown query '" + head + "'");
}

std::string run_query(const Query& q, const ClosedForm& g, const syntax::Program& decls) {
  switch (q.kind) {
    case Query::Kind::Mass: return mass(g).to_string();
    case Query::Kind::Expectation: return expectation(g, q.expr).to_string();
    case Query::Kind::Variance: return variance(g, *q.var).to_string();
    case Query::Kind::Probability: return prob_event(g, q.event, decls).to_string();
    case Query::Kind::Marginal: return marginal(g, q.keep).to_string();
    case Query::Kind::Coefficient: return coeff_state(g, q.state).to_string();
  }
  return "";
}

}  // namespace pgfcheck::queries
