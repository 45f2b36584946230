#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "irsolve/diagnostics.hpp"
#include "irsolve/io.hpp"
#include "irsolve/suite.hpp"

namespace py = pybind11;
using namespace irsolve;

namespace {

std::string run_config(const std::string& config_json) {
  const RunConfig cfg = parse_config(config_json);
  const SuiteEntry entry = make_problem(cfg.problem, cfg.params);
  BiraOptions o;
  o.tol = cfg.tol;
  o.budget = cfg.budget;
  o.hessian = cfg.hessian;
  o.x0 = entry.x0;
  o.y0 = entry.y0;
  if (cfg.x0) o.x0 = Eigen::Map<const Vector>(cfg.x0->data(), static_cast<Eigen::Index>(cfg.x0->size()));
  if (cfg.y0) o.y0 = *cfg.y0;
  RunReport report;
  {
    py::gil_scoped_release release;
    report = bira_run(*entry.problem, cfg.params, o);
  }
  return report_to_json(report);
}

std::string audit_trace(const std::string& trace_json, const std::string& kappas) {
  const RunReport report = report_from_json(trace_json);
  if (kappas != "configured" && kappas != "audited")
    throw ContractError("kappas must be 'configured' or 'audited'");
  const TheoreticalConstants tc = kappas == "audited"
                                      ? constants_for_report(report, audited_kappas(report))
                                      : constants_for_report(report);
  return audit_to_json(audit(report, tc), tc);
}

}  // namespace

PYBIND11_MODULE(_irsolve, m) {
  m.doc() = "Inexact-restoration solver core";
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);
  py::register_exception<AbnormalTermination>(m, "AbnormalTermination", PyExc_RuntimeError);

  m.attr("TRACE_VERSION") = kTraceVersion;
  m.def("problem_ids", &problem_ids);
  m.def("run_json", &run_config, py::arg("config_json"),
        "Solve the problem described by a config JSON string; returns the trace JSON.");
  m.def("audit_json", &audit_trace, py::arg("trace_json"), py::arg("kappas") = "configured",
        "Audit a trace JSON string; returns the audit report JSON.");
  m.def("complexity_fit", &complexity_fit, py::arg("runs"));
  m.def("merit_phi", &merit_phi, py::arg("f"), py::arg("h_norm"), py::arg("g"), py::arg("theta"));
}
