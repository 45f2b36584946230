#include "irsolve/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace irsolve {

namespace {

constexpr double kSlack = 1e-9;

// Collects results per check in a fixed order.
class Recorder {
 public:
  Recorder(AuditReport& report, const std::vector<std::string>& names) : report_(report) {
    for (const auto& n : names) {
      index_[n] = report_.checks.size();
      report_.checks.push_back(CheckResult{n});
    }
  }

  void not_evaluable(const std::string& name) {
    CheckResult& c = at(name);
    c.evaluable = false;
  }

  // lhs <= rhs with slack relative to the magnitudes involved.
  void leq(const std::string& name, int k, double lhs, double rhs, const std::string& what) {
    CheckResult& c = at(name);
    if (!c.evaluable) return;
    ++c.instances;
    const double margin = rhs - lhs;
    c.worst_margin = std::min(c.worst_margin, margin);
    const double tol = kSlack * std::max({1.0, std::abs(lhs), std::abs(rhs)});
    if (!(lhs <= rhs + tol)) {
      c.passed = false;
      std::ostringstream os;
      os.precision(12);
      os << what << ": " << lhs << " > " << rhs;
      report_.violations.push_back(Violation{name, k, os.str()});
    }
  }

 private:
  CheckResult& at(const std::string& name) { return report_.checks[index_.at(name)]; }

  AuditReport& report_;
  std::map<std::string, std::size_t> index_;
};

bool has_tail(const IterationRecord& r) { return !std::isnan(r.theta_after) && !std::isnan(r.mu_k); }

void require_field(bool ok, int k, const char* field) {
  if (!ok) {
    std::ostringstream os;
    os << "iteration " << k << ": field '" << field << "' is missing or malformed";
    throw SchemaError(os.str());
  }
}

void validate_trace(const RunReport& report) {
  const std::size_t n = report.iterations.size();
  for (std::size_t i = 0; i < n; ++i) {
    const IterationRecord& r = report.iterations[i];
    require_field(r.k == static_cast<int>(i), r.k, "k");
    require_field(r.x_k.size() > 0 && r.x_R.size() == r.x_k.size(), r.k, "x_R");
    require_field(std::isfinite(r.theta_before), r.k, "theta_before");
    require_field(r.h_xk_yR >= 0 && r.h_xR_yR >= 0, r.k, "h");
    const bool last = i + 1 == report.iterations.size();
    const bool failed = last && report.status == RunStatus::RestorationFailure;
    if (!failed) {
      require_field(has_tail(r), r.k, "theta_after");
      require_field(r.x_next.size() == r.x_k.size(), r.k, "x_next");
      require_field(std::isfinite(r.f_xR_yR) && std::isfinite(r.f_xk_yR), r.k, "f");
    }
  }
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "theta_monotone",
      "theta_lower_bound",
      "penalty_merit_decrease",
      "sigma_cap",
      "mu_cap",
      "restoration_distance",
      "restoration_objective",
      "restoration_step",
      "restoration_tests",
      "restoration_no_objective_evals",
      "restoration_certificate",
      "restoration_line_search",
      "tangent_certificate",
      "stationarity_vs_step",
      "evaluation_caps",
      "oracle_deterioration",
      "oracle_restricted_deterioration",
      "summability_infeasibility",
      "summability_steps",
      "summability_stationarity",
      "count_bounds",
      "stopping_test",
  };
  return names;
}

}  // namespace

const CheckResult* AuditReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

TheoreticalConstants constants_for_report(const RunReport& report) {
  return constants_for_report(report, Kappas::from_params(report.params));
}

TheoreticalConstants constants_for_report(const RunReport& report, const Kappas& kappas) {
  OracleExtras extras;
  if (report.assumptions) {
    extras.beta = report.assumptions->beta;
    extras.gamma = report.assumptions->gamma;
    extras.k_R = report.assumptions->k_R;
  } else {
    extras.known = false;
  }
  return constants(report.problem_constants, report.params, kappas, extras);
}

Kappas audited_kappas(const RunReport& report) {
  Kappas k{0.0, 0.0, 0.0, 0.0, "audited"};
  for (const auto& r : report.iterations) {
    k.kappa_R = std::max(k.kappa_R, r.max_kappa_R);
    k.kappa_phi = std::max(k.kappa_phi, r.max_kappa_phi);
    if (!has_tail(r)) continue;
    const SolveCertificate& c = r.tangent.accepted;
    if (c.step_norm > 0) {
      k.kappa = std::max(k.kappa, c.stationarity_residual / c.step_norm);
      k.kappa_T = std::max(k.kappa_T, c.tangent_violation / (c.step_norm * c.step_norm));
    }
  }
  // The formulas need positive inputs; a run without steps realizes none.
  const auto floor_at = [](double& v) { v = std::max(v, std::numeric_limits<double>::min()); };
  floor_at(k.kappa_R);
  floor_at(k.kappa_T);
  floor_at(k.kappa);
  floor_at(k.kappa_phi);
  return k;
}

AuditReport audit(const RunReport& report, const TheoreticalConstants& tc) {
  validate_trace(report);
  AuditReport out;
  out.kappa_source = tc.kappas.source;
  if (report.iterations.empty()) return out;

  Recorder rec(out, check_names());
  const bool extras_known = tc.extras.known;
  if (!extras_known) {
    for (const char* n : {"oracle_deterioration", "oracle_restricted_deterioration",
                          "summability_infeasibility", "summability_steps",
                          "summability_stationarity", "count_bounds"})
      rec.not_evaluable(n);
  }

  const AlgorithmParams& p = report.params;
  const Tolerances& tol = report.tol;
  const double r = p.r;
  const int restoration_cap_tests = static_cast<int>(std::min(tc.N_RESTA, 1e9));
  RealizedConstants& rc = out.realized;

  double prev_theta = p.theta_0;
  for (const IterationRecord& it : report.iterations) {
    const int k = it.k;
    const bool tail = has_tail(it);

    // Restoration phase.
    rec.leq("theta_monotone", k, it.theta_before, prev_theta, "theta_k above theta_{k-1}");
    rec.leq("sigma_cap", k, it.sigma_max, tc.sigma_cap, "sigma above max{10 sigma_bar, sigma_max}");
    rec.leq("restoration_distance", k, it.restoration_distance, tc.beta_R * it.h_xk_yR,
            "|x_R - x_k| above beta_R |h(x_k, y_R)|");
    rec.leq("restoration_step", k, it.max_step_ratio, tc.C_s,
            "restoration step over |h(x_k, w)| above C_s");
    rec.leq("restoration_tests", k, it.restoration_tests, restoration_cap_tests,
            "restoration tests above N_RESTA");
    rec.leq("restoration_no_objective_evals", k,
            static_cast<double>(it.restoration_ledger.f_evals + it.restoration_ledger.gradf_evals), 0.0,
            "restoration evaluated f or grad f");
    rec.leq("restoration_certificate", k, it.max_kappa_R, tc.kappas.kappa_R,
            "restoration residual ratio above kappa_R");
    rec.leq("restoration_line_search", k, it.max_kappa_phi, tc.kappas.kappa_phi,
            "restoration step above kappa_phi times the 1-D minimizer");
    rc.kappa_R = std::max(rc.kappa_R, it.max_kappa_R);
    rc.kappa_phi = std::max(rc.kappa_phi, it.max_kappa_phi);
    rc.sigma_max = std::max(rc.sigma_max, it.sigma_max);
    if (!tail) {
      prev_theta = it.theta_before;
      continue;
    }

    // Penalty update.
    rec.leq("theta_monotone", k, it.theta_after, it.theta_before, "theta_{k+1} above theta_k");
    rec.leq("theta_lower_bound", k, tc.theta_bar, it.theta_after, "theta_{k+1} below theta_bar");
    {
      const double lhs = merit_phi(it.f_xR_yR, it.h_xR_yR, it.g_yR, it.theta_after) -
                         merit_phi(it.f_xk_yR, it.h_xk_yR, it.g_yR, it.theta_after);
      const double rhs = (1.0 - r) / 2.0 * (it.h_xR_yR - it.h_xk_yR + it.g_yR - it.g_yk);
      rec.leq("penalty_merit_decrease", k, lhs, rhs, "merit comparison at theta_{k+1}");
    }
    prev_theta = it.theta_after;

    // Objective at the restored point.
    if (!std::isnan(it.f_xk_yk)) {
      rec.leq("restoration_objective", k, it.f_xR_yR,
              it.f_xk_yk + tc.beta_f * (it.h_xk_yR + it.g_yk),
              "f(x_R, y_R) above f(x_k, y_k) + beta_f (|h(x_k, y_R)| + g(y_k))");
      if (extras_known) {
        rec.leq("oracle_deterioration", k, it.f_xk_yR, it.f_xk_yk + tc.extras.beta * it.g_yk,
                "f(x_k, y_R) above f(x_k, y_k) + beta g(y_k)");
        if (k >= tc.extras.k_R && it.y_next == it.y_R) {
          rec.leq("oracle_restricted_deterioration", k, std::abs(it.f_xk_yR - it.f_xk_yk),
                  tc.beta_bar * it.g_yk, "|f(x_k, y_R) - f(x_k, y_k)| above beta_bar g(y_k)");
          rec.leq("oracle_restricted_deterioration", k, it.h_xk_yR,
                  it.h_xk_yk + tc.beta_bar * it.g_yk,
                  "|h(x_k, y_R)| above |h(x_k, y_k)| + beta_bar g(y_k)");
        }
      }
    }

    // Optimization phase.
    double mu_max = 0.0;
    for (double mu : it.mu_attempts) mu_max = std::max(mu_max, mu);
    rec.leq("mu_cap", k, mu_max, tc.mu_bar, "mu above mu_bar");
    rc.mu_max = std::max(rc.mu_max, mu_max);

    const SolveCertificate& c = it.tangent.accepted;
    rec.leq("tangent_certificate", k, c.model_decrease, 0.0, "tangent model increased");
    rec.leq("tangent_certificate", k, c.tangent_violation, tc.kappas.kappa_T * c.step_norm * c.step_norm,
            "|A d| above kappa_T |d|^2");
    rec.leq("tangent_certificate", k, c.stationarity_residual, tc.kappas.kappa * c.step_norm,
            "subproblem residual above kappa |d|");
    if (c.step_norm > 0) {
      rc.kappa = std::max(rc.kappa, c.stationarity_residual / c.step_norm);
      rc.kappa_T = std::max(rc.kappa_T, c.tangent_violation / (c.step_norm * c.step_norm));
    }
    rc.max_projection_residual =
        std::max(rc.max_projection_residual, it.tangent.max_projection_residual);
    rec.leq("stationarity_vs_step", k, it.stationarity, tc.C_p * it.step_norm,
            "stationarity residual above C_p |x_{k+1} - x_R|");

    const EvaluationLedger& e = it.iteration_ledger;
    rec.leq("evaluation_caps", k, static_cast<double>(e.h_evals), tc.N_R + tc.N_reg + 1.0,
            "h evaluations above N_R + N_reg + 1");
    rec.leq("evaluation_caps", k, static_cast<double>(e.gradh_evals), tc.N_R + 2.0,
            "grad h evaluations above N_R + 2");
    rec.leq("evaluation_caps", k, static_cast<double>(e.f_evals), tc.N_reg + 3.0,
            "f evaluations above N_reg + 3");
    rec.leq("evaluation_caps", k, static_cast<double>(e.gradf_evals), 2.0,
            "grad f evaluations above 2");

    // Cumulative quantities.
    rc.sum_infeasibility += it.h_xk_yR + it.g_yk;
    rc.sum_step_sq += it.step_norm * it.step_norm;
    rc.sum_residual_sq += it.stationarity * it.stationarity;
    if (extras_known) {
      rec.leq("summability_infeasibility", k, rc.sum_infeasibility, tc.C_feas,
              "partial sum of infeasibilities above C_feas");
      rec.leq("summability_steps", k, rc.sum_step_sq, tc.C_d,
              "partial sum of squared steps above C_d");
      rec.leq("summability_stationarity", k, rc.sum_residual_sq, tc.C_proj,
              "partial sum of squared residuals above C_proj");
    }

    const bool h_bad = it.h_xR_yR > tol.eps_feas;
    const bool gR_bad = it.g_yR > tol.eps_prec;
    const bool opt_bad = it.stationarity > tol.eps_opt;
    if (h_bad) ++rc.N_hinfeas;
    if (it.g_yk > tol.eps_prec) ++rc.N_ginfeas;
    if (h_bad || gR_bad) ++rc.N_infeas;
    if (opt_bad) ++rc.N_opt;
    if (h_bad || gR_bad || it.g_ynext > tol.eps_prec || opt_bad) ++rc.N_bad;
  }

  if (extras_known) {
    const CountBounds b = tc.bounds(tol.eps_feas, tol.eps_prec, tol.eps_opt);
    rec.leq("count_bounds", -1, rc.N_hinfeas, b.N_hinfeas, "iterations with |h(x_R, y_R)| > eps_feas");
    rec.leq("count_bounds", -1, rc.N_ginfeas, b.N_ginfeas, "iterations with g(y_k) > eps_prec");
    rec.leq("count_bounds", -1, rc.N_infeas, b.N_infeas, "infeasible or imprecise iterations");
    rec.leq("count_bounds", -1, rc.N_opt, b.N_opt, "iterations with residual > eps_opt");
    rec.leq("count_bounds", -1, rc.N_bad, b.N_max, "iterations counted by N_max");
  }

  if (report.status == RunStatus::Converged) {
    const IterationRecord& last = report.iterations.back();
    const int k = last.k;
    rec.leq("stopping_test", k, last.h_xR_yR, tol.eps_feas, "|h(x_R, y_R)| above eps_feas");
    rec.leq("stopping_test", k, last.g_yR, tol.eps_prec, "g(y_R) above eps_prec");
    rec.leq("stopping_test", k, last.g_ynext, tol.eps_prec, "g(y_{k+1}) above eps_prec");
    rec.leq("stopping_test", k, last.stationarity, tol.eps_opt, "residual above eps_opt");
  }
  return out;
}

double complexity_fit(const std::vector<std::pair<double, double>>& runs) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [eps, evals] : runs) {
    if (!(eps > 0) || !(evals > 0)) throw ContractError("complexity_fit: eps and evals must be > 0");
    xs.push_back(-std::log(eps));
    ys.push_back(std::log(evals));
  }
  std::vector<double> distinct = xs;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw ContractError("complexity_fit: insufficient data (need 3 distinct eps)");

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace irsolve
