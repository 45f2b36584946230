#include "irsolve/bira.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "irsolve/geometry.hpp"

namespace irsolve {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_norms(std::initializer_list<double> vals, const char* what) {
  for (double v : vals) {
    if (!(v >= 0)) throw ContractError(std::string(what) + ": norms and precisions must be >= 0");
  }
}

}  // namespace

RelaxationPolicy default_relaxation(int N_acce) {
  return [N_acce](int ell, const PrecisionLevel& y_k, const PrecisionLevel& y_R) {
    return ell < N_acce ? y_k : y_R;
  };
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "Converged";
    case RunStatus::RestorationFailure: return "RestorationFailure";
    case RunStatus::BudgetExceeded: return "BudgetExceeded";
  }
  return "BudgetExceeded";
}

RunStatus run_status_from_string(const std::string& s) {
  if (s == "Converged") return RunStatus::Converged;
  if (s == "RestorationFailure") return RunStatus::RestorationFailure;
  if (s == "BudgetExceeded") return RunStatus::BudgetExceeded;
  throw SchemaError("unknown run status '" + s + "'");
}

bool restoration_failure(double h_xk_yR, double h_xR_yR, double g_yk, double g_yR, double r) {
  require_norms({h_xk_yR, h_xR_yR, g_yk, g_yR}, "restoration_failure");
  if (!(r > 0 && r < 1)) throw ContractError("restoration_failure: r must lie in (0,1)");
  const bool no_reduction = h_xR_yR > r * h_xk_yR;
  const bool bad_tradeoff = (h_xk_yR - h_xR_yR) < (1.0 - r) / (2.0 * r) * (g_yk - g_yR);
  return no_reduction || bad_tradeoff;
}

bool check_penalty(double theta, double f_xR_yR, double f_xk_yR, double h_xk_yR,
                   double h_xR_yR, double g_yk, double g_yR, double r) {
  const double lhs =
      merit_phi(f_xR_yR, h_xR_yR, g_yR, theta) - merit_phi(f_xk_yR, h_xk_yR, g_yR, theta);
  const double rhs = (1.0 - r) / 2.0 * (h_xR_yR - h_xk_yR + g_yR - g_yk);
  return lhs <= rhs;
}

double penalty_quotient(double f_xR_yR, double f_xk_yR, double h_xk_yR, double h_xR_yR,
                        double g_yk, double g_yR, double r) {
  const double u = h_xk_yR - h_xR_yR;
  const double dg = g_yk - g_yR;
  const double den = 2.0 * (f_xR_yR - f_xk_yR + u + dg);
  if (!(den > 0)) throw InvariantViolation("penalty update: nonpositive denominator");
  return (1.0 + r) * (u + dg) / den;
}

double update_penalty(double theta_k, double f_xR_yR, double f_xk_yR, double h_xk_yR,
                      double h_xR_yR, double g_yk, double g_yR, double r) {
  require_norms({h_xk_yR, h_xR_yR, g_yk, g_yR}, "update_penalty");
  if (!(theta_k > 0 && theta_k < 1)) throw ContractError("update_penalty: theta_k must lie in (0,1)");
  if (check_penalty(theta_k, f_xR_yR, f_xk_yR, h_xk_yR, h_xR_yR, g_yk, g_yR, r)) return theta_k;

  const double u = h_xk_yR - h_xR_yR;
  const double dg = g_yk - g_yR;
  const double S = f_xR_yR - f_xk_yR + u;
  if (!(S > 0)) throw InvariantViolation("penalty update: merit test fails with S <= 0");
  // Root of the merit test, linear in theta with slope S.
  const double root = ((1.0 + r) / 2.0 * u - (1.0 - r) / 2.0 * dg) / S;
  const double theta =
      std::min(penalty_quotient(f_xR_yR, f_xk_yR, h_xk_yR, h_xR_yR, g_yk, g_yR, r), root);
  if (!(theta > 0)) throw InvariantViolation("penalty update produced a nonpositive theta");
  double out = std::min(theta, theta_k);
  // At the root the test holds with equality; step down past rounding.
  for (int i = 0; i < 64; ++i) {
    if (check_penalty(out, f_xR_yR, f_xk_yR, h_xk_yR, h_xR_yR, g_yk, g_yR, r)) return out;
    out = std::nextafter(out, 0.0);
  }
  throw InvariantViolation("penalty update: merit test fails at the computed theta");
}

long long restoration_hard_cap(const TheoreticalConstants& tc) {
  constexpr long long fallback = 100000;
  if (tc.problem.provenance != Provenance::analytic || !(tc.N_RESTA >= 1)) return fallback;
  const double cap = 10.0 * tc.N_RESTA;
  return cap < static_cast<double>(fallback) ? static_cast<long long>(cap) : fallback;
}

TheoreticalConstants constants_for(const InexactProblem& problem, const AlgorithmParams& params) {
  OracleExtras extras;
  if (const auto a = problem.assumptions()) {
    extras.beta = a->beta;
    extras.gamma = a->gamma;
    extras.k_R = a->k_R;
  } else {
    extras.known = false;
  }
  return constants(problem.constants(), params, Kappas::from_params(params), extras);
}

OptimizationResult optimization_phase(const OptimizationInputs& in, const InexactProblem& problem,
                                      const AlgorithmParams& params, const BiraOptions& options,
                                      const TheoreticalConstants& tc, EvaluationLedger& ledger) {
  const RelaxationPolicy policy =
      options.relaxation ? options.relaxation : default_relaxation(params.N_acce);
  const double theta = in.theta;
  const double r = params.r;
  const double g_yk = precision_g(in.y_k);
  const double g_yR = precision_g(in.y_R);
  const double slack = (1.0 - r) / 2.0 * (in.h_xR_yR - in.h_xk_yR + g_yR - g_yk);

  OptimizationResult out;
  std::optional<double> f_xk_yk = in.f_xk_yk;

  // Gradients at x_R, cached per precision (at most y_k and y_R).
  struct Linearization {
    PrecisionLevel y;
    Vector grad_f;
    std::optional<TangentSet> D;
  };
  std::vector<Linearization> cache;
  const auto linearize = [&](const PrecisionLevel& y) -> Linearization& {
    for (auto& l : cache)
      if (l.y == y) return l;
    Linearization l{y, problem.eval_grad_f(in.x_R, y, ledger), std::nullopt};
    const Matrix J = problem.eval_grad_h(in.x_R, y, ledger);
    l.D.emplace(problem.domain(), J.transpose(), in.x_R);
    cache.push_back(std::move(l));
    return cache.back();
  };

  const HessianModel H = build_H(problem, in.x_R, in.y_R, params.M, options.hessian, ledger);
  double mu = std::clamp(in.mu_start, params.mu_min, params.mu_max);

  for (int ell = 0;; ++ell) {
    const PrecisionLevel y = policy(ell, in.y_k, in.y_R);
    if (!(y == in.y_k) && !(y == in.y_R))
      throw ContractError("relaxation policy must return y_k or y_R");
    Linearization& lin = linearize(y);
    const QpResult qp = solve_tangent_qp(lin.grad_f, H, mu, *lin.D, params.kappa_T, params.kappa,
                                         options.qp_max_iters);
    out.mu_attempts.push_back(mu);
    const SolveCertificate& cert = qp.certificate;
    auto& cs = out.certificates;
    cs.max_kappa_ratio = std::max(cs.max_kappa_ratio, cert.kappa_ratio);
    cs.max_kappa_T_ratio = std::max(cs.max_kappa_T_ratio, cert.kappa_T_ratio);
    cs.max_projection_residual = std::max(cs.max_projection_residual, cert.projection_residual);
    if (cert.flagged) ++cs.flagged;

    const double step = cert.step_norm;
    const double f_x = problem.eval_f(qp.point, y, ledger);
    const Vector h_x = problem.eval_h(qp.point, y, ledger);
    const double g_y = precision_g(y);

    // Merit reference at (x_k, y).
    double f_ref = 0.0;
    double h_ref = 0.0;
    if (y == in.y_R) {
      f_ref = in.f_xk_yR;
      h_ref = in.h_xk_yR;
    } else {
      if (!f_xk_yk) {
        f_xk_yk = problem.eval_f(in.x_k, in.y_k, ledger);
        out.f_xk_yk = *f_xk_yk;
      }
      f_ref = *f_xk_yk;
      h_ref = in.h_xk_yk ? *in.h_xk_yk : problem.eval_h(in.x_k, in.y_k, ledger).norm();
    }

    const bool objective_ok = f_x <= in.f_xR_yR - params.alpha * step * step;
    const bool merit_ok =
        merit_phi(f_x, h_x.norm(), g_y, theta) - merit_phi(f_ref, h_ref, g_y, theta) <= slack;
    if (objective_ok && merit_ok) {
      out.x_next = qp.point;
      out.y_next = y;
      out.mu_k = mu;
      out.ell_count = ell + 1;
      out.f_next = f_x;
      out.h_next = h_x;
      cs.accepted = cert;
      out.stationarity = stationarity_residual(in.x_R, lin.grad_f, *lin.D);
      return out;
    }
    if (ell + 1 > tc.N_reg && y == in.y_R && mu >= tc.C_mu) {
      std::ostringstream os;
      os << "optimization phase failed " << ell + 1 << " times; mu=" << mu
         << " exceeds C_mu=" << tc.C_mu;
      throw InvariantViolation(os.str());
    }
    mu *= 2.0;
  }
}

RunReport bira_run(const InexactProblem& problem, const AlgorithmParams& params,
                   const BiraOptions& options) {
  params.validate();
  if (options.budget <= 0) throw ConfigError("budget must be > 0");
  const Tolerances& tol = options.tol;
  if (!(tol.eps_feas > 0) || !(tol.eps_prec > 0) || !(tol.eps_opt > 0))
    throw ConfigError("tolerances must be > 0");
  if (options.x0.size() != problem.dim()) throw ConfigError("x0 has the wrong dimension");
  require_finite(options.x0, "x0");
  if (!problem.domain().contains(options.x0)) throw ConfigError("x0 lies outside the box");

  const TheoreticalConstants tc = constants_for(problem, params);
  RestaOptions resta_opts;
  resta_opts.hard_cap = restoration_hard_cap(tc);
  resta_opts.qp_max_iters = options.qp_max_iters;

  RunReport report;
  report.problem_id = problem.id();
  report.tol = tol;
  report.budget = options.budget;
  report.params = params;
  report.problem_constants = problem.constants();
  report.assumptions = problem.assumptions();
  report.hessian = options.hessian;

  EvaluationLedger ledger;
  PenaltyState penalty(params.theta_0);
  DecisionPoint x = options.x0;
  PrecisionLevel y = options.y0;
  std::optional<double> f_cached;  // f(x, y)
  std::optional<Vector> h_cached;  // h(x, y)
  double mu_prev = params.mu_init;

  for (int k = 0; k < options.budget; ++k) {
    IterationRecord rec;
    rec.k = k;
    rec.x_k = x;
    rec.y_k = y;
    rec.theta_before = penalty.theta();
    rec.g_yk = precision_g(y);
    const EvaluationLedger iter_start = ledger;

    try {
      // Step 1.
      resta_opts.h_xk_yk = h_cached;
      const RestorationOutcome rest = resta(x, y, problem, params, ledger, resta_opts);
      rec.x_R = rest.x_R;
      rec.y_R = rest.y_R;
      rec.h_xk_yk = rest.h_xk_yk;
      rec.h_xk_yR = rest.h_xk_yR;
      rec.h_xR_yR = rest.h_xR_yR;
      rec.g_yR = precision_g(rest.y_R);
      rec.restoration_distance = (rest.x_R - x).norm();
      rec.restoration_status = rest.status;
      rec.restoration_tests = rest.inner_iterations;
      rec.restoration_refinements = rest.refinements;
      rec.sigma_max = rest.sigma_history.empty()
                          ? 0.0
                          : *std::max_element(rest.sigma_history.begin(), rest.sigma_history.end());
      rec.max_step_ratio = rest.max_step_ratio;
      rec.max_kappa_R = rest.max_kappa_R;
      rec.max_kappa_phi = rest.max_kappa_phi;
      rec.restoration_flagged = rest.flagged_qp;
      rec.restoration_ledger = rest.ledger_delta;
      rec.f_xk_yk = f_cached ? *f_cached : kNaN;

      const auto fill_nan_tail = [&rec]() {
        rec.theta_after = rec.theta_before;
        rec.f_xk_yR = rec.f_xR_yR = rec.f_xnext_ynext = kNaN;
        rec.phi_xR_yR = rec.phi_xk_yR = kNaN;
        rec.mu_k = kNaN;
        rec.h_xnext_ynext = rec.g_ynext = kNaN;
        rec.step_norm = rec.stationarity = kNaN;
      };

      if (restoration_failure(rec.h_xk_yR, rec.h_xR_yR, rec.g_yk, rec.g_yR, params.r)) {
        fill_nan_tail();
        rec.iteration_ledger = ledger - iter_start;
        rec.cumulative_ledger = ledger;
        report.iterations.push_back(std::move(rec));
        report.status = RunStatus::RestorationFailure;
        report.final_x = rest.x_R;
        report.final_y = rest.y_R;
        report.final_infeasibility = rest.h_xR_yR;
        break;
      }

      // Step 2.
      const bool same_pair_as_k = rest.x_R == x && rest.y_R == y;
      if (same_pair_as_k && f_cached) {
        rec.f_xR_yR = rec.f_xk_yR = *f_cached;
      } else {
        rec.f_xR_yR = problem.eval_f(rest.x_R, rest.y_R, ledger);
        rec.f_xk_yR = rest.x_R == x ? rec.f_xR_yR : problem.eval_f(x, rest.y_R, ledger);
      }
      if (rest.y_R == y && !f_cached) rec.f_xk_yk = rec.f_xk_yR;
      const double theta_next =
          update_penalty(penalty.theta(), rec.f_xR_yR, rec.f_xk_yR, rec.h_xk_yR, rec.h_xR_yR,
                         rec.g_yk, rec.g_yR, params.r);
      penalty.push(theta_next);
      rec.theta_after = theta_next;
      rec.phi_xR_yR = merit_phi(rec.f_xR_yR, rec.h_xR_yR, rec.g_yR, theta_next);
      rec.phi_xk_yR = merit_phi(rec.f_xk_yR, rec.h_xk_yR, rec.g_yR, theta_next);

      // Step 3.
      OptimizationInputs in;
      in.x_k = x;
      in.y_k = y;
      in.x_R = rest.x_R;
      in.y_R = rest.y_R;
      in.theta = theta_next;
      in.f_xR_yR = rec.f_xR_yR;
      in.f_xk_yR = rec.f_xk_yR;
      in.h_xk_yR = rec.h_xk_yR;
      in.h_xR_yR = rec.h_xR_yR;
      if (!std::isnan(rec.f_xk_yk)) in.f_xk_yk = rec.f_xk_yk;
      in.h_xk_yk = rec.h_xk_yk;
      in.mu_start = mu_prev;
      const OptimizationResult opt = optimization_phase(in, problem, params, options, tc, ledger);
      if (!std::isnan(opt.f_xk_yk)) rec.f_xk_yk = opt.f_xk_yk;

      rec.x_next = opt.x_next;
      rec.y_next = opt.y_next;
      rec.mu_k = opt.mu_k;
      rec.ell_count = opt.ell_count;
      rec.mu_attempts = opt.mu_attempts;
      rec.f_xnext_ynext = opt.f_next;
      rec.h_xnext_ynext = opt.h_next.norm();
      rec.g_ynext = precision_g(opt.y_next);
      rec.step_norm = (opt.x_next - rest.x_R).norm();
      rec.stationarity = opt.stationarity;
      rec.tangent = opt.certificates;
      rec.iteration_ledger = ledger - iter_start;
      rec.cumulative_ledger = ledger;

      mu_prev = opt.mu_k;
      x = opt.x_next;
      y = opt.y_next;
      f_cached = opt.f_next;
      h_cached = opt.h_next;

      const bool stop = rec.h_xR_yR <= tol.eps_feas && rec.g_yR <= tol.eps_prec &&
                        rec.g_ynext <= tol.eps_prec && rec.stationarity <= tol.eps_opt;
      report.final_residual = rec.stationarity;
      report.iterations.push_back(std::move(rec));
      if (stop) {
        report.status = RunStatus::Converged;
        report.final_x = rest.x_R;
        report.final_y = rest.y_R;
        report.final_infeasibility = rest.h_xR_yR;
        break;
      }
      report.status = RunStatus::BudgetExceeded;
      report.final_x = x;
      report.final_y = y;
      report.final_infeasibility = opt.h_next.norm();
    } catch (const DomainError& e) {
      std::ostringstream os;
      os << "iteration " << k << ": " << e.what();
      throw DomainError(os.str());
    }
  }
  report.total = ledger;
  return report;
}

}  // namespace irsolve
