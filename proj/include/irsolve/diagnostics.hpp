#pragma once

#include <string>
#include <utility>
#include <vector>

#include "irsolve/bira.hpp"
#include "irsolve/theory.hpp"

namespace irsolve {

struct CheckResult {
  std::string name;
  bool passed = true;
  /// False when the bound depends on oracle constants the run did not declare.
  bool evaluable = true;
  /// Smallest (bound - observed) over all instances; negative when violated.
  double worst_margin = std::numeric_limits<double>::infinity();
  int instances = 0;
};

struct Violation {
  std::string check;
  int iteration = -1;  // -1 for whole-run checks
  std::string detail;
};

/// Measured counterparts of the theoretical constants.
struct RealizedConstants {
  double kappa_R = 0.0;
  double kappa_T = 0.0;
  double kappa = 0.0;
  double kappa_phi = 0.0;
  double sigma_max = 0.0;
  double mu_max = 0.0;
  double sum_infeasibility = 0.0;
  double sum_step_sq = 0.0;
  double sum_residual_sq = 0.0;
  double max_projection_residual = 0.0;
  int N_hinfeas = 0;
  int N_ginfeas = 0;
  int N_infeas = 0;
  int N_opt = 0;
  int N_bad = 0;  // iterations counted by the N_max bound
};

struct AuditReport {
  std::vector<CheckResult> checks;
  std::vector<Violation> violations;
  RealizedConstants realized;
  std::string kappa_source;

  [[nodiscard]] bool passed() const { return violations.empty(); }
  [[nodiscard]] const CheckResult* find(const std::string& name) const;
};

/// Constants for the problem, parameters and oracle declarations stored in a
/// report. Kappas default to the configured targets.
[[nodiscard]] TheoreticalConstants constants_for_report(const RunReport& report);
[[nodiscard]] TheoreticalConstants constants_for_report(const RunReport& report,
                                                        const Kappas& kappas);

/// Largest inexactness ratios met along a run.
[[nodiscard]] Kappas audited_kappas(const RunReport& report);

/// Checks a trace against every per-iteration and cumulative bound of the
/// convergence theory, with relative slack 1e-9.
[[nodiscard]] AuditReport audit(const RunReport& report, const TheoreticalConstants& tc);

/// Least-squares slope of log(evals) against log(1/eps).
[[nodiscard]] double complexity_fit(const std::vector<std::pair<double, double>>& runs);

}  // namespace irsolve
