#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "irsolve/core.hpp"
#include "irsolve/oracle.hpp"
#include "irsolve/qp.hpp"
#include "irsolve/resta.hpp"
#include "irsolve/theory.hpp"

namespace irsolve {

enum class RunStatus { Converged, RestorationFailure, BudgetExceeded };

[[nodiscard]] std::string to_string(RunStatus s);
[[nodiscard]] RunStatus run_status_from_string(const std::string& s);

struct Tolerances {
  double eps_feas = 1e-6;
  double eps_prec = 1e-6;
  double eps_opt = 1e-4;
};

/// Summary of the subproblem certificates met during one optimization phase.
struct TangentCertificates {
  SolveCertificate accepted;
  double max_kappa_ratio = 0.0;
  double max_kappa_T_ratio = 0.0;
  double max_projection_residual = 0.0;
  int flagged = 0;
};

/// Everything one outer iteration produced. Values that were never computed
/// are NaN; the optimization-phase fields stay NaN on Restoration Failure.
struct IterationRecord {
  int k = 0;
  DecisionPoint x_k, x_R, x_next;
  PrecisionLevel y_k, y_R, y_next;
  double theta_before = 0.0;
  double theta_after = 0.0;
  double mu_k = 0.0;
  int ell_count = 0;  // optimization-phase attempts
  std::vector<double> mu_attempts;

  // constraint norms at the (point, precision) pairs used
  double h_xk_yk = 0.0;
  double h_xk_yR = 0.0;
  double h_xR_yR = 0.0;
  double h_xnext_ynext = 0.0;

  double g_yk = 0.0;
  double g_yR = 0.0;
  double g_ynext = 0.0;

  // objective values
  double f_xk_yk = 0.0;
  double f_xk_yR = 0.0;
  double f_xR_yR = 0.0;
  double f_xnext_ynext = 0.0;

  // merit values at theta_after
  double phi_xR_yR = 0.0;
  double phi_xk_yR = 0.0;

  double restoration_distance = 0.0;  // |x_R - x_k|
  double step_norm = 0.0;             // |x_next - x_R|
  double stationarity = 0.0;          // tangent residual at x_R with grad f(x_R, y_next)

  // restoration summary
  RestorationStatus restoration_status = RestorationStatus::Restored;
  int restoration_tests = 0;
  int restoration_refinements = 0;
  double sigma_max = 0.0;
  double max_step_ratio = 0.0;
  double max_kappa_R = 0.0;
  double max_kappa_phi = 0.0;
  int restoration_flagged = 0;
  EvaluationLedger restoration_ledger;

  TangentCertificates tangent;

  EvaluationLedger iteration_ledger;  // evaluations of this iteration
  EvaluationLedger cumulative_ledger;  // totals at the end of this iteration
};

/// Precision used at optimization attempt `ell`. The default keeps y_k for
/// the first N_acce attempts and y_R afterwards.
using RelaxationPolicy = std::function<PrecisionLevel(int ell, const PrecisionLevel& y_k,
                                                      const PrecisionLevel& y_R)>;

[[nodiscard]] RelaxationPolicy default_relaxation(int N_acce);

struct BiraOptions {
  Tolerances tol;
  int budget = 500;
  DecisionPoint x0;
  PrecisionLevel y0;
  HessianPolicy hessian = HessianPolicy::zero;
  /// Only y_k and y_R are valid choices for the attempt index ell.
  RelaxationPolicy relaxation;
  int qp_max_iters = 500;
};

struct RunReport {
  std::string problem_id;
  RunStatus status = RunStatus::BudgetExceeded;
  std::vector<IterationRecord> iterations;
  DecisionPoint final_x;
  PrecisionLevel final_y;
  double final_infeasibility = 0.0;  // |h(final_x, final_y)|
  double final_residual = 0.0;       // last tangent stationarity residual
  EvaluationLedger total;
  Tolerances tol;
  int budget = 0;
  AlgorithmParams params;
  ProblemConstants problem_constants;
  std::optional<OracleAssumptions> assumptions;
  HessianPolicy hessian = HessianPolicy::zero;
};

/// True iff the restored pair fails the reduction test or the
/// feasibility/precision trade-off test.
[[nodiscard]] bool restoration_failure(double h_xk_yR, double h_xR_yR, double g_yk, double g_yR,
                                       double r);

/// Merit-comparison test; true when theta can be kept.
[[nodiscard]] bool check_penalty(double theta, double f_xR_yR, double f_xk_yR, double h_xk_yR,
                                 double h_xR_yR, double g_yk, double g_yR, double r);

/// The update quotient as usually stated:
///   (1+r)(u + dg) / (2 (f_R - f_kR + u + dg)), u = a - b, dg = g_k - g_R.
[[nodiscard]] double penalty_quotient(double f_xR_yR, double f_xk_yR, double h_xk_yR,
                                      double h_xR_yR, double g_yk, double g_yR, double r);

/// Keeps theta_k when the merit test passes. Otherwise returns the smaller of
/// penalty_quotient and the largest theta for which the merit test holds with
/// equality, so the returned value always passes the test.
[[nodiscard]] double update_penalty(double theta_k, double f_xR_yR, double f_xk_yR,
                                    double h_xk_yR, double h_xR_yR, double g_yk, double g_yR,
                                    double r);

struct OptimizationInputs {
  DecisionPoint x_k, x_R;
  PrecisionLevel y_k, y_R;
  double theta = 0.0;  // theta_{k+1}
  double f_xR_yR = 0.0;
  double f_xk_yR = 0.0;
  double h_xk_yR = 0.0;
  double h_xR_yR = 0.0;
  /// Known values at (x_k, y_k); evaluated on demand otherwise.
  std::optional<double> f_xk_yk;
  std::optional<double> h_xk_yk;
  double mu_start = 1.0;
};

struct OptimizationResult {
  DecisionPoint x_next;
  PrecisionLevel y_next;
  double mu_k = 0.0;
  int ell_count = 0;
  std::vector<double> mu_attempts;
  double f_next = 0.0;
  Vector h_next;
  double f_xk_yk = std::numeric_limits<double>::quiet_NaN();  // if evaluated here
  double stationarity = 0.0;  // tangent residual at x_R for the accepted precision
  TangentCertificates certificates;
};

/// Step 3: tangent subproblems with growing regularization until both the
/// objective and the merit decrease tests pass.
[[nodiscard]] OptimizationResult optimization_phase(const OptimizationInputs& in,
                                                    const InexactProblem& problem,
                                                    const AlgorithmParams& params,
                                                    const BiraOptions& options,
                                                    const TheoreticalConstants& tc,
                                                    EvaluationLedger& ledger);

/// Default iteration budget for the restoration hard cap.
[[nodiscard]] long long restoration_hard_cap(const TheoreticalConstants& tc);

[[nodiscard]] TheoreticalConstants constants_for(const InexactProblem& problem,
                                                 const AlgorithmParams& params);

[[nodiscard]] RunReport bira_run(const InexactProblem& problem, const AlgorithmParams& params,
                                 const BiraOptions& options);

}  // namespace irsolve
