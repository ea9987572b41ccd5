#include "pgfcheck/cli/driver.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>

#include "pgfcheck/cas/fps.hpp"
#include "pgfcheck/cas/parse.hpp"
#include "pgfcheck/equivalence/equivalence.hpp"
#include "pgfcheck/queries/queries.hpp"
#include "pgfcheck/semantics/semantics.hpp"
#include "pgfcheck/syntax/desugar.hpp"
#include "pgfcheck/syntax/parser.hpp"
#include "pgfcheck/syntax/printer.hpp"

namespace pgfcheck::cli {

using cas::ClosedForm;
using cas::Coeff;
using equivalence::Verdict;
using json = nlohmann::ordered_json;

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Accepts a variable by its own name or by its indeterminate name.
std::optional<std::string> resolve_var(std::string_view name, const syntax::Program& decls) {
  for (const auto& v : decls.all_vars()) {
    if (v == name || syntax::indet_name(v) == name) return v;
  }
  return std::nullopt;
}

cas::IndetResolver resolver(const syntax::Program& decls) {
  return [&decls](std::string_view name) -> std::optional<cas::Indet> {
    if (auto v = resolve_var(name, decls)) return semantics::var_indet(*v);
    if (decls.declares_param(std::string(name))) return semantics::param_indet(std::string(name));
    return std::nullopt;
  };
}

syntax::Program load(const std::string& path, const std::string& invariant_path) {
  syntax::Program p = syntax::parse_program(read_file(path));
  if (!invariant_path.empty()) {
    if (p.spec) throw Error(ErrorKind::Usage, path + " already has an invariant section");
    p.spec = syntax::parse_spec(read_file(invariant_path), p);
  }
  return p;
}

std::string state_string(const std::map<std::string, std::uint32_t>& s) {
  std::string out;
  for (const auto& [k, v] : s) out += (out.empty() ? "" : ", ") + k + "=" + std::to_string(v);
  return out.empty() ? "(all zero)" : out;
}

std::uint32_t program_degree(const cas::ExpVec& m) {
  std::uint32_t d = 0;
  for (const auto& [x, e] : m.entries()) {
    if (x.kind() == cas::IndetKind::Program) d += e;
  }
  return d;
}

struct CommonFlags {
  std::string program;
  std::string invariant;
  std::string input;
  std::vector<std::string> params;
  bool uast = false;
  std::string format = "text";
};

int report_error(const Error& e, const std::string& format, std::ostream& out, std::ostream& err) {
  if (format == "json") {
    json j;
    j["verdict"] = "Error";
    j["error"] = std::string(to_string(e.kind()));
    j["diagnostic"] = e.what();
    out << j.dump(2) << "\n";
  }
  err << "error: " << e.what() << "\n";
  return 2;
}

int cmd_check(const CommonFlags& f, std::uint32_t bound, std::ostream& out) {
  syntax::Program p = load(f.program, f.invariant);
  equivalence::CheckOptions opts{f.uast, bound};
  auto result = equivalence::verify_compositional(p, opts);
  if (result.loops.empty()) throw Error(ErrorKind::Usage, "the program has no loops to check");

  bool any_ne = false;
  bool any_err = false;
  json loops = json::array();
  for (const auto& l : result.loops) {
    const Verdict& v = l.verdict;
    any_ne = any_ne || v.kind == Verdict::Kind::NotEqual;
    any_err = any_err || v.kind == Verdict::Kind::Error;
    if (f.format == "json") {
      json j;
      j["label"] = l.label;
      j["verdict"] = std::string(equivalence::to_string(v.kind));
      j["witness_state"] = v.witness ? json(v.witness->input_state) : json(nullptr);
      j["discrepancy"] = v.witness ? json(v.witness->discrepancy.to_string()) : json(nullptr);
      j["closed_form"] = v.inv_sop ? json(v.inv_sop->to_string()) : json(nullptr);
      j["timings_ms"] = v.ms;
      j["parameters"] = l.parameters;
      if (v.kind == Verdict::Kind::Equal) j["conclusion"] = v.conclusion(f.uast);
      if (v.bound_exhausted) j["bound_exhausted"] = true;
      if (!v.diagnostic.empty()) j["diagnostic"] = v.diagnostic;
      loops.push_back(std::move(j));
      continue;
    }
    out << l.label << ": " << equivalence::to_string(v.kind);
    out << std::fixed << std::setprecision(1) << " (" << v.ms << " ms)\n";
    switch (v.kind) {
      case Verdict::Kind::Equal: out << "  " << v.conclusion(f.uast) << "\n"; break;
      case Verdict::Kind::NotEqual:
        if (v.witness) {
          out << "  witness input: " << state_string(v.witness->input_state) << "\n";
          out << "  discrepancy: " << v.witness->discrepancy.to_string() << "\n";
        } else {
          out << "  no witness up to degree " << bound << "\n";
        }
        break;
      case Verdict::Kind::Error: out << "  " << v.diagnostic << "\n"; break;
    }
    if (!l.parameters.empty()) {
      out << "  parameters:";
      for (const auto& name : l.parameters) out << " " << name;
      out << "\n";
    }
  }
  const char* overall = any_ne ? "NotEqual" : any_err ? "Error" : "Equal";
  if (f.format == "json") {
    json j;
    j["verdict"] = overall;
    j["loops"] = std::move(loops);
    out << j.dump(2) << "\n";
  }
  return any_ne ? 1 : any_err ? 2 : 0;
}

ClosedForm output_of(const CommonFlags& f, syntax::Program& p) {
  p = load(f.program, f.invariant);
  ClosedForm input = parse_input(f.input, p);
  ClosedForm out = equivalence::output_distribution(p, input, {f.uast, 10});
  return bind_params(out, parse_bindings(f.params, p));
}

int cmd_query(const CommonFlags& f, const std::vector<std::string>& qs, std::ostream& out) {
  syntax::Program p;
  ClosedForm g = output_of(f, p);
  std::vector<queries::Query> parsed;
  for (const auto& q : qs) parsed.push_back(queries::parse_query(q, p));
  json results = json::array();
  for (std::size_t i = 0; i < qs.size(); ++i) {
    std::string r = queries::run_query(parsed[i], g, p);
    if (f.format == "json") {
      results.push_back(json{{"query", qs[i]}, {"result", r}});
    } else {
      out << (qs.size() > 1 ? qs[i] + " = " : "") << r << "\n";
    }
  }
  if (f.format == "json") out << json{{"closed_form", g.to_string()}, {"queries", results}}.dump(2) << "\n";
  return 0;
}

int cmd_expand(const CommonFlags& f, std::uint32_t degree, std::ostream& out) {
  syntax::Program p;
  ClosedForm g = output_of(f, p);
  ClosedForm e = expand_series(g, degree);
  if (f.format == "json") {
    out << json{{"closed_form", g.to_string()}, {"degree", degree}, {"series", e.to_string()}}.dump(2) << "\n";
  } else {
    out << e.to_string() << "\n";
  }
  return 0;
}

int cmd_sample(const CommonFlags& f, const std::vector<std::string>& events, std::uint64_t n, std::uint64_t seed,
               std::uint64_t cap, std::ostream& out) {
  syntax::Program p = load(f.program, "");
  sampler::ConcreteState init = parse_state(f.input, p);
  auto params = parse_bindings(f.params, p);
  std::vector<syntax::Guard> guards;
  for (const auto& e : events) guards.push_back(syntax::parse_guard(e, p));
  sampler::Sampler s(p, params);
  sampler::Histogram h = sampler::histogram(p, init, n, seed, params, cap);
  json rows = json::array();
  for (std::size_t i = 0; i < events.size(); ++i) {
    std::uint64_t hits = 0;
    for (const auto& [state, count] : h.counts) {
      if (s.holds(guards[i], state)) hits += count;
    }
    double freq = n ? static_cast<double>(hits) / static_cast<double>(n) : 0;
    double se = n ? std::sqrt(freq * (1 - freq) / static_cast<double>(n)) : 0;
    if (f.format == "json") {
      rows.push_back(json{{"event", events[i]}, {"hits", hits}, {"frequency", freq}, {"std_error", se}});
    } else {
      out << "P[" << events[i] << "] ~ " << std::setprecision(6) << freq << " +- " << se << " (" << hits << "/" << n
          << ")\n";
    }
  }
  if (f.format == "json") {
    out << json{{"rng", sampler::kRngAlgorithm}, {"seed", seed}, {"samples", n}, {"timeouts", h.timeouts},
                {"events", rows}}
               .dump(2)
        << "\n";
  } else {
    out << "rng " << sampler::kRngAlgorithm << ", seed " << seed << ", " << h.timeouts << " timeouts\n";
  }
  return 0;
}

int cmd_parse(const CommonFlags& f, bool desugared, std::ostream& out) {
  syntax::Program p = load(f.program, f.invariant);
  if (desugared) {
    syntax::Program d = syntax::desugar(p);
    out << syntax::print(d);
    if (!d.temps.empty()) {
      out << "// temporaries:";
      for (const auto& t : d.temps) out << " " << t;
      out << "\n";
    }
  } else {
    out << syntax::print(p);
  }
  return 0;
}

}  // namespace

ClosedForm expand_series(const ClosedForm& f, std::uint32_t degree) {
  cas::DegreeBounds bounds;
  for (cas::Indet x : f.indets()) {
    if (x.kind() == cas::IndetKind::Program) bounds.emplace_back(x, degree);
  }
  ClosedForm t = cas::taylor_cf(f, bounds);
  std::vector<cas::Poly::Term> kept;
  for (const auto& term : t.num().terms()) {
    if (program_degree(term.first) <= degree) kept.push_back(term);
  }
  return ClosedForm(cas::Poly::from_terms(std::move(kept)), t.den());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Usage, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ClosedForm parse_input(const std::string& text_in, const syntax::Program& decls) {
  std::string text = trim(text_in);
  if (text.empty()) return ClosedForm(1);
  if (text.find('~') == std::string::npos && text.find('=') != std::string::npos) {
    cas::Poly point(1);
    for (const auto& [v, e] : parse_state(text, decls)) {
      point *= cas::Poly::indet(semantics::var_indet(v), static_cast<std::uint32_t>(e));
    }
    return point;
  }
  if (text.find('~') == std::string::npos) return cas::parse_closed_form(text, resolver(decls));

  std::string stmts;
  for (const auto& item : split(text, ',')) {
    auto tilde = item.find('~');
    if (tilde == std::string::npos) throw Error(ErrorKind::Usage, "expected var~distribution in '" + item + "'");
    stmts += trim(item.substr(0, tilde)) + " := " + trim(item.substr(tilde + 1)) + ";\n";
  }
  syntax::Program work = decls;
  syntax::Stmt s = syntax::parse_spec(stmts, work);
  syntax::Stmt core = syntax::desugar_stmt(s, work);
  return semantics::Semantics(work).apply(core, ClosedForm(1));
}

sampler::ConcreteState parse_state(const std::string& text_in, const syntax::Program& decls) {
  std::string text = trim(text_in);
  sampler::ConcreteState out;
  if (text.empty() || text == "1") return out;
  if (text.find('=') != std::string::npos) {
    for (const auto& item : split(text, ',')) {
      auto eq = item.find('=');
      auto v = eq == std::string::npos ? std::nullopt : resolve_var(trim(item.substr(0, eq)), decls);
      auto value = eq == std::string::npos ? std::nullopt : cas::parse_rational(trim(item.substr(eq + 1)));
      if (!v || !value || *value < 0 || value->get_den() != 1) {
        throw Error(ErrorKind::Usage, "expected var=natural in '" + item + "'");
      }
      out[*v] = value->get_num().get_ui();
    }
    return out;
  }
  ClosedForm f = cas::parse_closed_form(text, resolver(decls));
  const auto& terms = f.num().terms();
  if (!f.is_polynomial() || terms.size() != 1 || terms[0].second != f.den().constant_term()) {
    throw Error(ErrorKind::Usage, "sampling needs a point-mass input such as N^5 or n=5");
  }
  for (const auto& [x, e] : terms[0].first.entries()) {
    auto v = resolve_var(x.name(), decls);
    if (!v) throw Error(ErrorKind::Usage, "sampling input mentions '" + x.name() + "'");
    out[*v] = e;
  }
  return out;
}

std::map<std::string, Coeff> parse_bindings(const std::vector<std::string>& items, const syntax::Program& decls) {
  std::map<std::string, Coeff> out;
  for (const auto& raw : items) {
    for (const auto& item : split(raw, ',')) {
      auto eq = item.find('=');
      std::string name = trim(item.substr(0, eq));
      auto value = eq == std::string::npos ? std::nullopt : cas::parse_rational(trim(item.substr(eq + 1)));
      if (!value) throw Error(ErrorKind::Usage, "expected name=rational in '" + item + "'");
      if (!decls.declares_param(name)) throw Error(ErrorKind::Usage, "'" + name + "' is not a declared parameter");
      out[name] = *value;
    }
  }
  return out;
}

ClosedForm bind_params(const ClosedForm& f, const std::map<std::string, Coeff>& params) {
  ClosedForm out = f;
  for (const auto& [name, v] : params) out = cas::cf_subst(out, semantics::param_indet(name), ClosedForm(v));
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact generating-function verifier and query engine for ReDiP programs", "pgfcheck"};
  app.require_subcommand(1);

  CommonFlags f;
  std::uint32_t bound = 10;
  std::uint32_t degree = 5;
  std::vector<std::string> qs;
  std::vector<std::string> events;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  std::uint64_t cap = sampler::kDefaultStepCap;
  bool desugared = false;

  auto common = [&](CLI::App* sub, bool with_invariant) {
    sub->add_option("program", f.program, "ReDiP source file")->required();
    if (with_invariant) sub->add_option("--invariant", f.invariant, "Loop-free specification for the top-level loop");
    sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  };

  auto* check = app.add_subcommand("check", "Check loops against their invariants");
  common(check, true);
  check->add_flag("--assume-uast", f.uast, "Treat loops as universally almost-surely terminating");
  check->add_option("--degree-bound", bound, "Counterexample search bound on the total degree");

  auto* query = app.add_subcommand("query", "Evaluate queries on the output distribution");
  common(query, true);
  query->add_option("--input", f.input, "Input distribution");
  query->add_option("--q", qs, "Query: mass, E[..], Var[x], P[..], marginal[..], coeff[..]")->required();
  query->add_option("--param", f.params, "Parameter binding name=value");
  query->add_flag("--assume-uast", f.uast);

  auto* exp = app.add_subcommand("expand", "Print the truncated output series");
  common(exp, true);
  exp->add_option("--input", f.input, "Input distribution");
  exp->add_option("--degree", degree, "Total degree bound");
  exp->add_option("--param", f.params, "Parameter binding name=value");

  auto* sample = app.add_subcommand("sample", "Estimate event probabilities by simulation");
  common(sample, false);
  sample->add_option("--input", f.input, "Point-mass input, e.g. N^5 or n=5");
  sample->add_option("--event", events, "Rectangular guard");
  sample->add_option("--samples", samples, "Number of runs");
  sample->add_option("--seed", seed, "Generator seed");
  sample->add_option("--step-cap", cap, "Loop iterations per run before a timeout");
  sample->add_option("--param", f.params, "Parameter binding name=value");

  auto* parse = app.add_subcommand("parse", "Parse and pretty-print a program");
  common(parse, true);
  parse->add_flag("--desugar", desugared, "Print the core-language translation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) return cmd_check(f, bound, out);
    if (*query) return cmd_query(f, qs, out);
    if (*exp) return cmd_expand(f, degree, out);
    if (*sample) return cmd_sample(f, events.empty() ? std::vector<std::string>{"true"} : events, samples, seed, cap, out);
    if (*parse) return cmd_parse(f, desugared, out);
  } catch (const Error& e) {
    return report_error(e, f.format, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace pgfcheck::cli
