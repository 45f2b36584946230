#pragma once

#include <optional>
#include <string>
#include <vector>

#include "irsolve/core.hpp"
#include "irsolve/oracle.hpp"
#include "irsolve/qp.hpp"

namespace irsolve {

enum class RestorationStatus { Restored, PossibleInfeasibility, TrivialReturn, PDPRestored };

[[nodiscard]] std::string to_string(RestorationStatus s);
[[nodiscard]] RestorationStatus restoration_status_from_string(const std::string& s);

struct RestorationOutcome {
  DecisionPoint x_R;
  PrecisionLevel y_R;
  RestorationStatus status = RestorationStatus::Restored;

  /// Number of sufficient-decrease tests performed.
  int inner_iterations = 0;
  /// Completed passes through the precision-refinement step.
  int refinements = 0;
  int accepted_steps = 0;
  std::vector<double> sigma_history;

  // Cached constraint norms, reused by the outer loop.
  double h_xk_yk = 0.0;  // |h(x_k, y_k)|
  double h_xk_yR = 0.0;  // |h(x_k, y_R)|
  double h_xR_yR = 0.0;  // |h(x_R, y_R)|
  Vector h_xR_yR_vec;

  // Quantities audited against the theory.
  double max_step_ratio = 0.0;     // max |z_{l+1} - z_l| / |h(x_k, w)|
  double max_kappa_R = 0.0;        // max residual / step over accepted steps
  double max_kappa_phi = 0.0;      // max realized line-minimizer ratio
  int flagged_qp = 0;
  bool c_monotone = true;          // accepted steps satisfied the decrease test
  double final_pg_residual = 0.0;  // projected gradient of c at x_R when tested

  EvaluationLedger ledger_delta;
};

struct RestaOptions {
  /// h(x_k, y_k) when the caller already has it.
  std::optional<Vector> h_xk_yk;
  /// Abort with AbnormalTermination past this many decrease tests plus
  /// refinement rounds.
  long long hard_cap = 100000;
  int qp_max_iters = 500;
};

/// Candidate check for a problem-dependent restoration.
struct PdpCheck {
  bool accepted = false;
  double h_xk_yR = 0.0;
  double h_xR_yR = 0.0;
  Vector h_xR_yR_vec;
};

/// sigma <- 2 sigma
[[nodiscard]] double sigma_schedule(double sigma);

/// Starting point of the inner loop: x_k itself.
[[nodiscard]] DecisionPoint choose_z0(const DecisionPoint& x_k);

/// Verifies the three reduction inequalities and the distance bound for a
/// PDP candidate using two fresh h evaluations.
[[nodiscard]] PdpCheck check_pdp(const RestoredPair& candidate, const DecisionPoint& x_k,
                                 const PrecisionLevel& y_k, const InexactProblem& problem,
                                 const AlgorithmParams& params, EvaluationLedger& ledger);

/// Restores feasibility and precision from (x_k, y_k). Evaluates only h and
/// its gradient.
[[nodiscard]] RestorationOutcome resta(const DecisionPoint& x_k, const PrecisionLevel& y_k,
                                       const InexactProblem& problem,
                                       const AlgorithmParams& params, EvaluationLedger& ledger,
                                       const RestaOptions& options = {});

}  // namespace irsolve
