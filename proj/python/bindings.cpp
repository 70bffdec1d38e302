#include "rdinst/engine.hpp"
#include "rdinst/errors.hpp"
#include "rdinst/frontend.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace rdinst;

namespace {

std::vector<std::string> command_for(const py::object& backend) {
  if (backend.is_none()) {
    const char* env = std::getenv("RDINST_BACKEND");
    return split_command(env && *env ? env : "z3 -in");
  }
  if (py::isinstance<py::str>(backend)) return split_command(backend.cast<std::string>());
  return backend.cast<std::vector<std::string>>();
}

py::dict solve(const std::string& text, const py::object& backend, unsigned max_iterations, long long wall_clock_ms,
               unsigned preferred_fraction, long long backend_timeout_ms, bool trace) {
  TermManager tm;
  Problem problem = normalize(tm, parse_script(tm, text));
  EngineConfig c;
  c.backend.command = command_for(backend);
  c.backend.timeout = std::chrono::milliseconds(backend_timeout_ms);
  c.max_iterations = max_iterations;
  c.wall_clock = std::chrono::milliseconds(wall_clock_ms);
  c.preferred_fraction = preferred_fraction;
  c.trace = trace;
  Engine engine(tm, std::move(problem), c);

  SolveResult r;
  {
    py::gil_scoped_release release;
    r = engine.solve();
  }
  std::vector<std::string> instances;
  for (Term t : r.instances) instances.push_back(print_smtlib(t));

  py::dict out;
  out["verdict"] = std::string(verdict_name(r.verdict));
  out["reason"] = r.reason;
  out["iterations"] = r.stats.iterations;
  out["stats"] = py::module_::import("json").attr("loads")(r.stats.to_json());
  out["trace"] = r.trace;
  out["instances"] = instances;
  out["model"] = r.model ? py::object(py::str(r.model->to_string())) : py::object(py::none());
  return out;
}

py::dict relevant_domains(const std::string& text) {
  TermManager tm;
  Problem problem = normalize(tm, parse_script(tm, text));
  Engine engine(tm, std::move(problem), EngineConfig{});
  RelevantDomains rd = engine.current_domains(engine.current_stats());
  py::dict out;
  for (const VarDomain& d : rd.domains()) {
    std::vector<std::string> terms;
    for (Term t : d.terms) terms.push_back(print_smtlib(t));
    out[py::str(d.var->name + "," + std::to_string(d.var->unit))] = terms;
  }
  return out;
}

std::string dump_domains(const std::string& text) {
  TermManager tm;
  Problem problem = normalize(tm, parse_script(tm, text));
  Engine engine(tm, std::move(problem), EngineConfig{});
  return engine.current_domains(engine.current_stats()).dump();
}

py::dict normalize_script(const std::string& text) {
  TermManager tm;
  Problem p = normalize(tm, parse_script(tm, text));
  std::vector<std::string> ground;
  for (Term t : p.ground) ground.push_back(print_smtlib(t));
  py::list units;
  for (const QuantifiedUnit& u : p.units) {
    std::vector<std::string> vars;
    for (const Symbol* x : u.vars) vars.push_back(x->smt_name);
    units.append(py::make_tuple(vars, print_smtlib(u.body)));
  }
  py::dict out;
  out["logic"] = p.logic;
  out["ground"] = ground;
  out["units"] = units;
  out["warnings"] = p.warnings;
  return out;
}

py::dict term_stats(const std::string& text) {
  TermManager tm;
  Problem p = normalize(tm, parse_script(tm, text));
  StatsTable st = compute_stats(p.ground, p.units, {});
  py::dict out;
  for (const auto& [t, s] : st.entries()) out[py::str(print_smtlib(t))] = py::make_tuple(s.occurrences, s.depth, s.birth);
  return out;
}

}  // namespace

PYBIND11_MODULE(_rdinst, m) {
  m.doc() = "Model-based quantifier instantiation guided by relevant domains";

  static py::exception<Error> error(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<BackendError>(m, "BackendError", error.ptr());

  m.def("solve", &solve, py::arg("text"), py::arg("backend") = py::none(), py::arg("max_iterations") = 1000,
        py::arg("wall_clock_ms") = 600'000, py::arg("preferred_fraction") = 3,
        py::arg("backend_timeout_ms") = 60'000, py::arg("trace") = false,
        "Solve an SMT-LIB script. Returns verdict, reason, iterations, stats, trace, instances and model.");
  m.def("relevant_domains", &relevant_domains, py::arg("text"),
        "Initial relevant domain of every quantified variable, keyed by 'name,unit'.");
  m.def("dump_domains", &dump_domains, py::arg("text"));
  m.def("normalize", &normalize_script, py::arg("text"));
  m.def("term_stats", &term_stats, py::arg("text"),
        "Occurrences, depth and birth of every ground term of the input.");
}
