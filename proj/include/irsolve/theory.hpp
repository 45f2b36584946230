#pragma once

#include <string>

#include "irsolve/core.hpp"

namespace irsolve {

/// Inexactness constants of the two subproblem solvers.
struct Kappas {
  double kappa_R = 10.0;
  double kappa_T = 10.0;
  double kappa = 10.0;
  double kappa_phi = 2.0;
  /// "configured" (solver targets) or "audited" (measured maxima of a run).
  std::string source = "configured";

  [[nodiscard]] static Kappas from_params(const AlgorithmParams& p);
};

/// Oracle-side constants that a trajectory cannot reveal.
struct OracleExtras {
  double beta = 0.0;   // bounded deterioration of f under refinement
  double gamma = 0.5;  // in (0,1)
  int k_R = 0;
  int N_PDP = 2;       // h / grad h evaluations spent checking a PDP candidate
  bool known = true;   // false when the oracle did not declare them
};

/// Iteration-count bounds for given tolerances. Held as doubles because the
/// bounds routinely exceed the range of 64-bit integers.
struct CountBounds {
  double N_hinfeas = 0.0;
  double N_ginfeas = 0.0;
  double N_infeas = 0.0;
  double N_opt = 0.0;
  double N_max = 0.0;
};

/// Closed-form constants of the convergence and complexity theory. Integer
/// counts are floor-ed doubles.
struct TheoreticalConstants {
  ProblemConstants problem;
  AlgorithmParams params;
  Kappas kappas;
  OracleExtras extras;

  // restoration phase
  double sigma_bar = 0.0;
  double sigma_cap = 0.0;  // max{10 sigma_bar, sigma_max}
  double c_P_Omega = 0.0;
  double C_rest = 0.0;
  double C_s = 0.0;
  double n_sigma = 0.0;
  double N_RESTA = 0.0;
  double N_R = 0.0;
  double beta_R = 0.0;
  double beta_f = 0.0;

  // penalty and optimization phase
  double theta_bar = 0.0;
  double alpha_tilde = 0.0;
  double C_mu = 0.0;
  double N_reg = 0.0;
  double mu_bar = 0.0;

  // summability
  double beta_bar = 0.0;
  double C_rho = 0.0;
  double C_feas = 0.0;
  double C_d = 0.0;
  double C_p = 0.0;
  double C_proj = 0.0;

  [[nodiscard]] CountBounds bounds(double eps_feas, double eps_prec, double eps_opt) const;
  /// c_target and eps_c of the restoration stopping tests for a given
  /// constraint residual |h(x_k, w)|.
  [[nodiscard]] double c_target(double h_xk_w_norm) const;
  [[nodiscard]] double eps_c(double h_xk_w_norm) const;
};

// Individual formulas, exposed for unit checks.
[[nodiscard]] double sigma_bar_formula(double L_c, double M, double alpha_R);
[[nodiscard]] double n_sigma_formula(double sigma_bar, double sigma_min);
[[nodiscard]] double theta_bar_formula(double theta0, double L_f, double beta_R, double r);

[[nodiscard]] TheoreticalConstants constants(const ProblemConstants& problem,
                                             const AlgorithmParams& params,
                                             const Kappas& kappas, const OracleExtras& extras);

/// theta_bar only depends on quantities available before any run; the suite
/// uses it to scale its noise.
[[nodiscard]] double beta_bar_for(const ProblemConstants& problem, const AlgorithmParams& params,
                                  const Kappas& kappas, double gamma);

}  // namespace irsolve
