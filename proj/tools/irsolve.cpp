// Command-line front end: run, suite, audit, complexity.
//
// Exit codes: 0 success / Converged, 1 configuration or I/O error,
// 2 RestorationFailure, 3 BudgetExceeded, 4 audit violations.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "irsolve/diagnostics.hpp"
#include "irsolve/io.hpp"
#include "irsolve/suite.hpp"

namespace {

using namespace irsolve;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitRestorationFailure = 2;
constexpr int kExitBudget = 3;
constexpr int kExitViolations = 4;

int exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return kExitOk;
    case RunStatus::RestorationFailure: return kExitRestorationFailure;
    case RunStatus::BudgetExceeded: return kExitBudget;
  }
  return kExitError;
}

BiraOptions options_for(const RunConfig& cfg, const SuiteEntry& entry) {
  BiraOptions o;
  o.tol = cfg.tol;
  o.budget = cfg.budget;
  o.hessian = cfg.hessian;
  o.x0 = entry.x0;
  o.y0 = entry.y0;
  if (cfg.x0) o.x0 = Eigen::Map<const Vector>(cfg.x0->data(), static_cast<Eigen::Index>(cfg.x0->size()));
  if (cfg.y0) o.y0 = *cfg.y0;
  return o;
}

std::string summary_line(const RunReport& r) {
  std::ostringstream os;
  os.precision(6);
  os << "status=" << to_string(r.status) << " iterations=" << r.iterations.size()
     << " infeasibility=" << r.final_infeasibility << " residual=" << r.final_residual
     << " evals=" << r.total.total() << " (f=" << r.total.f_evals << " gradf=" << r.total.gradf_evals
     << " h=" << r.total.h_evals << " gradh=" << r.total.gradh_evals << ")";
  return os.str();
}

// Runs `work(i)` for i in [0, n) with at most `jobs` tasks in flight.
template <typename T, typename F>
std::vector<T> parallel_map(std::size_t n, int jobs, F work) {
  std::vector<T> out;
  out.reserve(n);
  const std::size_t width = static_cast<std::size_t>(std::max(jobs, 1));
  for (std::size_t start = 0; start < n; start += width) {
    std::vector<std::future<T>> batch;
    for (std::size_t i = start; i < std::min(n, start + width); ++i)
      batch.push_back(std::async(width == 1 ? std::launch::deferred : std::launch::async, work, i));
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

// Shortest representation that reads back to the same double.
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int cmd_run(const std::string& config_path, const std::string& out_flag) {
  const RunConfig cfg = load_config(config_path);
  const SuiteEntry entry = make_problem(cfg.problem, cfg.params);
  const RunReport report = bira_run(*entry.problem, cfg.params, options_for(cfg, entry));
  const std::string out = !out_flag.empty() ? out_flag : !cfg.out.empty() ? cfg.out : "trace.json";
  write_file(out, report_to_json(report));
  std::cout << cfg.problem << ": " << summary_line(report) << "\n";
  std::cout << "trace written to " << out << "\n";
  return exit_code(report.status);
}

struct SuiteRow {
  std::string id;
  RunStatus expected;
  RunStatus status;
  std::size_t iterations;
  std::uint64_t evals;
  double distance;  // to the known minimizer, NaN if none
  std::size_t violations;
  bool pass;
};

int cmd_suite(const std::string& config_path, const std::string& out_dir, int jobs_flag) {
  RunConfig cfg;
  cfg.params = suite_params();
  if (!config_path.empty()) cfg = load_config(config_path);
  const int jobs = jobs_flag > 0 ? jobs_flag : cfg.jobs;
  const std::vector<std::string> ids = problem_ids();

  const auto rows = parallel_map<SuiteRow>(ids.size(), jobs, [&](std::size_t i) {
    const SuiteEntry entry = make_problem(ids[i], cfg.params);
    BiraOptions o;
    o.tol = cfg.tol;
    o.budget = cfg.budget;
    o.hessian = cfg.hessian;
    o.x0 = entry.x0;
    o.y0 = entry.y0;
    const RunReport report = bira_run(*entry.problem, cfg.params, o);
    const AuditReport a = audit(report, constants_for_report(report));
    if (!out_dir.empty()) write_file(out_dir + "/" + ids[i] + ".json", report_to_json(report));
    SuiteRow row{ids[i],
                 entry.expected,
                 report.status,
                 report.iterations.size(),
                 report.total.total(),
                 std::numeric_limits<double>::quiet_NaN(),
                 a.violations.size(),
                 false};
    if (entry.minimizer && report.status == RunStatus::Converged)
      row.distance = (report.final_x - *entry.minimizer).norm();
    row.pass = row.status == row.expected && row.violations == 0 &&
               (std::isnan(row.distance) || row.distance <= 1e-3);
    return row;
  });

  bool all = true;
  std::printf("%-7s %-19s %-19s %6s %7s %11s %6s %s\n", "problem", "expected", "status", "iters",
              "evals", "dist", "viol", "result");
  for (const auto& r : rows) {
    all = all && r.pass;
    char dist[32] = "-";
    if (!std::isnan(r.distance)) std::snprintf(dist, sizeof dist, "%.3g", r.distance);
    std::printf("%-7s %-19s %-19s %6zu %7llu %11s %6zu %s\n", r.id.c_str(),
                to_string(r.expected).c_str(), to_string(r.status).c_str(), r.iterations,
                static_cast<unsigned long long>(r.evals), dist, r.violations,
                r.pass ? "PASS" : "FAIL");
  }
  return all ? kExitOk : kExitViolations;
}

int cmd_audit(const std::string& trace_path, const std::string& kappa_source,
              const std::string& out) {
  const RunReport report = report_from_json(read_file(trace_path));
  TheoreticalConstants tc;
  if (kappa_source == "audited") {
    tc = constants_for_report(report, audited_kappas(report));
  } else {
    tc = constants_for_report(report);
  }
  const AuditReport a = audit(report, tc);
  if (!out.empty()) write_file(out, audit_to_json(a, tc));

  std::cout << "audit of " << trace_path << " (" << report.iterations.size()
            << " iterations, kappas " << a.kappa_source << ")\n";
  for (const auto& c : a.checks) {
    const char* verdict = !c.evaluable ? "n/a " : c.passed ? "pass" : "FAIL";
    std::printf("  %-32s %s  instances=%d  worst_margin=%.3g\n", c.name.c_str(), verdict,
                c.instances, c.worst_margin);
  }
  for (const auto& v : a.violations)
    std::cout << "violation: " << v.check << " at k=" << v.iteration << ": " << v.detail << "\n";
  std::cout << (a.passed() ? "no violations" : std::to_string(a.violations.size()) + " violation(s)")
            << "\n";
  return a.passed() ? kExitOk : kExitViolations;
}

int cmd_complexity(const std::string& config_path, const std::string& out_flag, int jobs_flag) {
  const RunConfig cfg = load_config(config_path);
  const int jobs = jobs_flag > 0 ? jobs_flag : cfg.jobs;
  const std::vector<double>& grid = cfg.eps_grid;

  const auto reports = parallel_map<RunReport>(grid.size(), jobs, [&](std::size_t i) {
    const SuiteEntry entry = make_problem(cfg.problem, cfg.params);
    BiraOptions o = options_for(cfg, entry);
    o.tol.eps_opt = grid[i];
    return bira_run(*entry.problem, cfg.params, o);
  });

  std::ostringstream csv;
  csv << "eps_opt,f_evals,gradf_evals,h_evals,gradh_evals,iterations,status\n";
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const RunReport& r = reports[i];
    csv << shortest(grid[i]) << "," << r.total.f_evals << "," << r.total.gradf_evals << ","
        << r.total.h_evals << "," << r.total.gradh_evals << "," << r.iterations.size() << ","
        << to_string(r.status) << "\n";
    points.emplace_back(grid[i], static_cast<double>(r.total.total()));
  }
  const std::string out = !out_flag.empty() ? out_flag : !cfg.out.empty() ? cfg.out : "complexity.csv";
  write_file(out, csv.str());
  std::cout << "wrote " << grid.size() << " rows to " << out << "\n";
  std::cout << "slope=" << complexity_fit(points) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inexact-restoration solver with trace auditing"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  int jobs = 0;
  std::string trace;
  std::string kappas = "configured";

  auto* run = app.add_subcommand("run", "Solve one problem described by a config file");
  run->add_option("--config", config, "Config JSON")->required();
  run->add_option("--out", out, "Trace JSON path");

  auto* suite = app.add_subcommand("suite", "Run and audit every built-in problem");
  suite->add_option("--config", config, "Optional config JSON (params, tolerances)");
  suite->add_option("--out", out, "Directory for per-problem traces");
  suite->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);

  auto* aud = app.add_subcommand("audit", "Audit a trace against the theoretical bounds");
  aud->add_option("trace", trace, "Trace JSON")->required();
  aud->add_option("--out", out, "Audit report JSON path");
  aud->add_option("--kappas", kappas, "Kappa constants: configured or audited")
      ->check(CLI::IsMember({"configured", "audited"}));

  auto* cx = app.add_subcommand("complexity", "Sweep eps_opt and fit the evaluation slope");
  cx->add_option("--config", config, "Config JSON with eps_grid")->required();
  cx->add_option("--out", out, "CSV path");
  cx->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*run) return cmd_run(config, out);
    if (*suite) return cmd_suite(config, out, jobs);
    if (*aud) return cmd_audit(trace, kappas, out);
    if (*cx) return cmd_complexity(config, out, jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
