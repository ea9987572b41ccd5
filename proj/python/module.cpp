#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pgfcheck/cli/driver.hpp"
#include "pgfcheck/equivalence/equivalence.hpp"
#include "pgfcheck/queries/queries.hpp"
#include "pgfcheck/sampler/sampler.hpp"
#include "pgfcheck/syntax/desugar.hpp"
#include "pgfcheck/syntax/parser.hpp"
#include "pgfcheck/syntax/printer.hpp"

namespace py = pybind11;
using namespace pgfcheck;

namespace {

syntax::Program load(const std::string& source, const std::optional<std::string>& invariant) {
  syntax::Program p = syntax::parse_program(source);
  if (invariant) {
    if (p.spec) throw Error(ErrorKind::Usage, "program already has an invariant section");
    p.spec = syntax::parse_spec(*invariant, p);
  }
  return p;
}

std::vector<std::string> binding_items(const std::map<std::string, std::string>& params) {
  std::vector<std::string> items;
  for (const auto& [k, v] : params) items.push_back(k + "=" + v);
  return items;
}

cas::ClosedForm output(const syntax::Program& p, const std::string& input,
                       const std::map<std::string, std::string>& params, bool uast) {
  cas::ClosedForm g = cli::parse_input(input, p);
  cas::ClosedForm out = equivalence::output_distribution(p, g, {uast, 10});
  return cli::bind_params(out, cli::parse_bindings(binding_items(params), p));
}

std::string format(const std::string& source, bool desugared) {
  syntax::Program p = syntax::parse_program(source);
  return syntax::print(desugared ? syntax::desugar(p) : p);
}

py::dict check(const std::string& source, const std::optional<std::string>& invariant, bool assume_uast,
               std::uint32_t degree_bound) {
  syntax::Program p = load(source, invariant);
  auto r = equivalence::verify_compositional(p, {assume_uast, degree_bound});
  py::list loops;
  std::string overall = "Equal";
  for (const auto& l : r.loops) {
    const auto& v = l.verdict;
    py::dict d;
    d["label"] = l.label;
    d["verdict"] = std::string(equivalence::to_string(v.kind));
    d["parameters"] = l.parameters;
    d["diagnostic"] = v.diagnostic;
    d["bound_exhausted"] = v.bound_exhausted;
    d["ms"] = v.ms;
    d["closed_form"] = v.inv_sop ? py::object(py::str(v.inv_sop->to_string())) : py::object(py::none());
    if (v.witness) {
      d["witness_state"] = v.witness->input_state;
      d["discrepancy"] = v.witness->discrepancy.to_string();
    } else {
      d["witness_state"] = py::none();
      d["discrepancy"] = py::none();
    }
    if (v.kind == equivalence::Verdict::Kind::NotEqual) {
      overall = "NotEqual";
    } else if (v.kind == equivalence::Verdict::Kind::Error && overall == "Equal") {
      overall = "Error";
    }
    loops.append(d);
  }
  py::dict out;
  out["verdict"] = overall;
  out["loops"] = loops;
  return out;
}

std::string closed_form(const std::string& source, const std::string& input,
                        const std::optional<std::string>& invariant, const std::map<std::string, std::string>& params,
                        bool assume_uast) {
  syntax::Program p = load(source, invariant);
  return output(p, input, params, assume_uast).to_string();
}

py::object query(const std::string& source, const std::string& input, const py::object& queries_arg,
                 const std::optional<std::string>& invariant, const std::map<std::string, std::string>& params,
                 bool assume_uast) {
  syntax::Program p = load(source, invariant);
  cas::ClosedForm g = output(p, input, params, assume_uast);
  if (py::isinstance<py::str>(queries_arg)) {
    return py::str(queries::run_query(queries::parse_query(queries_arg.cast<std::string>(), p), g, p));
  }
  py::list results;
  for (const auto& q : queries_arg.cast<std::vector<std::string>>()) {
    results.append(queries::run_query(queries::parse_query(q, p), g, p));
  }
  return results;
}

std::string expand(const std::string& source, const std::string& input, std::uint32_t degree,
                   const std::optional<std::string>& invariant, const std::map<std::string, std::string>& params) {
  syntax::Program p = load(source, invariant);
  return cli::expand_series(output(p, input, params, false), degree).to_string();
}

py::dict sample(const std::string& source, const std::string& input, const std::string& event, std::uint64_t samples,
                std::uint64_t seed, const std::map<std::string, std::string>& params, std::uint64_t step_cap) {
  syntax::Program p = syntax::parse_program(source);
  auto init = cli::parse_state(input, p);
  auto bound = cli::parse_bindings(binding_items(params), p);
  auto e = sampler::estimate(p, init, syntax::parse_guard(event, p), samples, seed, bound, step_cap);
  py::dict d;
  d["samples"] = e.samples;
  d["hits"] = e.hits;
  d["timeouts"] = e.timeouts;
  d["frequency"] = e.frequency;
  d["std_error"] = e.std_error;
  d["rng"] = sampler::kRngAlgorithm;
  return d;
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"pgfcheck"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(pgfcheck, m) {
  m.doc() = "Exact PGF-based verification and queries for rectangular discrete probabilistic programs";

  // kept alive by the module for the lifetime of the interpreter
  static PyObject* error_type = py::exception<Error>(m, "PgfcheckError", PyExc_ValueError).inc_ref().ptr();
  py::register_exception_translator([](std::exception_ptr ptr) {
    try {
      if (ptr) std::rethrow_exception(ptr);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type)(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  m.def("format", &format, py::arg("source"), py::arg("desugar") = false,
        "Parses a program and prints it back, optionally desugared to the core language.");
  m.def("check", &check, py::arg("source"), py::arg("invariant") = py::none(), py::arg("assume_uast") = false,
        py::arg("degree_bound") = 10, "Checks every loop against its invariant, innermost first.");
  m.def("closed_form", &closed_form, py::arg("source"), py::arg("input") = "", py::arg("invariant") = py::none(),
        py::arg("params") = std::map<std::string, std::string>{}, py::arg("assume_uast") = false,
        "Output PGF of the program on the given input.");
  m.def("query", &query, py::arg("source"), py::arg("input"), py::arg("queries"), py::arg("invariant") = py::none(),
        py::arg("params") = std::map<std::string, std::string>{}, py::arg("assume_uast") = false,
        "Runs one query (str) or several (list) on the output distribution.");
  m.def("expand", &expand, py::arg("source"), py::arg("input") = "", py::arg("degree") = 5,
        py::arg("invariant") = py::none(), py::arg("params") = std::map<std::string, std::string>{},
        "Taylor expansion of the output distribution up to the given total degree.");
  m.def("sample", &sample, py::arg("source"), py::arg("input") = "", py::arg("event") = "true",
        py::arg("samples") = 100000, py::arg("seed") = 0, py::arg("params") = std::map<std::string, std::string>{},
        py::arg("step_cap") = sampler::kDefaultStepCap, "Estimates an event probability by simulation.");
  m.def("run_cli", &run_cli, py::arg("args"), "Runs the command-line driver; returns (exit code, stdout, stderr).");
}
