#include "irsolve/theory.hpp"

#include <algorithm>
#include <cmath>

namespace irsolve {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0) || !std::isfinite(v))
    throw ConfigError(std::string(name) + " must be nonnegative");
}

}  // namespace

Kappas Kappas::from_params(const AlgorithmParams& p) {
  return {p.kappa_R, p.kappa_T, p.kappa, p.kappa_phi, "configured"};
}

double sigma_bar_formula(double L_c, double M, double alpha_R) {
  return 2.0 * (L_c + M / 2.0 + alpha_R);
}

double n_sigma_formula(double sigma_bar, double sigma_min) {
  return std::floor(std::log2(sigma_bar) - std::log2(sigma_min)) + 1.0;
}

double theta_bar_formula(double theta0, double L_f, double beta_R, double r) {
  const double inv = (2.0 / (1.0 + r)) * (L_f * beta_R / (1.0 - r) + 1.0);
  return std::min(theta0, 1.0 / inv);
}

TheoreticalConstants constants(const ProblemConstants& problem, const AlgorithmParams& params,
                               const Kappas& kappas, const OracleExtras& extras) {
  params.validate();
  problem.validate();
  require_positive(kappas.kappa_R, "kappa_R");
  require_positive(kappas.kappa_T, "kappa_T");
  require_positive(kappas.kappa, "kappa");
  require_positive(kappas.kappa_phi, "kappa_phi");
  require_nonnegative(extras.beta, "beta");
  if (!(extras.gamma > 0 && extras.gamma < 1)) throw ConfigError("gamma must lie in (0,1)");
  if (extras.k_R < 0 || extras.N_PDP < 0) throw ConfigError("k_R and N_PDP must be >= 0");

  const AlgorithmParams& p = params;
  const ProblemConstants& pc = problem;
  TheoreticalConstants t;
  t.problem = problem;
  t.params = params;
  t.kappas = kappas;
  t.extras = extras;

  t.sigma_bar = sigma_bar_formula(pc.L_c, p.M, p.alpha_R);
  t.sigma_cap = std::max(10.0 * t.sigma_bar, p.sigma_max);
  t.c_P_Omega = pc.L_c + p.M + kappas.kappa_R + t.sigma_cap;
  t.C_rest = t.c_P_Omega * t.c_P_Omega * (1.0 - p.r * p.r) / (2.0 * p.alpha_R * p.r_feas * p.r_feas) +
             1.0;
  t.C_s = kappas.kappa_phi * p.M * pc.C_h;
  t.n_sigma = n_sigma_formula(t.sigma_bar, p.sigma_min);
  t.N_RESTA = std::floor((t.C_rest * t.n_sigma + 1.0) * p.N_prec);
  t.N_R = t.N_RESTA + extras.N_PDP;
  t.beta_R = std::max(p.beta_PDP, p.beta_c + t.N_RESTA * t.C_s);
  t.beta_f = pc.L_f * t.beta_R + extras.beta;

  t.theta_bar = theta_bar_formula(p.theta_0, pc.L_f, t.beta_R, p.r);
  t.alpha_tilde = std::max(p.alpha, (1.0 - t.theta_bar) / t.theta_bar * (kappas.kappa_T + pc.L_h));
  t.C_mu = p.M + t.alpha_tilde + pc.L_f;
  t.N_reg = std::max(std::floor(std::log2(t.C_mu) - std::log2(p.mu_min)),
                     static_cast<double>(p.N_acce)) +
            1.0;
  t.mu_bar = std::max(10.0 * t.C_mu, std::pow(10.0, p.N_acce) * p.mu_max);

  const double one_minus_r_sq = (1.0 - p.r) * (1.0 - p.r);
  t.beta_bar = t.theta_bar * (1.0 - extras.gamma) * one_minus_r_sq / 2.0;
  t.C_rho = pc.C_h / t.theta_bar;
  t.C_feas = 2.0 / (extras.gamma * one_minus_r_sq) *
             (extras.k_R * (2.0 * pc.C_f + pc.C_h) + t.C_rho + pc.C_h + pc.C_g);
  t.C_d = ((t.beta_f + extras.beta) * t.C_feas + 2.0 * pc.C_f) / p.alpha;
  t.C_p = p.M + kappas.kappa + 2.0 * t.mu_bar + 2.0;
  t.C_proj = t.C_p * t.C_p * t.C_d;
  return t;
}

CountBounds TheoreticalConstants::bounds(double eps_feas, double eps_prec, double eps_opt) const {
  require_positive(eps_feas, "eps_feas");
  require_positive(eps_prec, "eps_prec");
  require_positive(eps_opt, "eps_opt");
  const double r = params.r;
  CountBounds b;
  b.N_hinfeas = std::floor(r * C_feas / eps_feas);
  b.N_ginfeas = std::floor(C_feas / eps_prec);
  b.N_infeas = std::floor(std::max(r * C_feas / eps_feas, r * C_feas / eps_prec));
  b.N_opt = std::floor(C_proj / (eps_opt * eps_opt));
  b.N_max = b.N_infeas + b.N_ginfeas + b.N_opt;
  return b;
}

double TheoreticalConstants::c_target(double h_xk_w_norm) const {
  return params.r * params.r * 0.5 * h_xk_w_norm * h_xk_w_norm;
}

double TheoreticalConstants::eps_c(double h_xk_w_norm) const {
  return params.r_feas * h_xk_w_norm;
}

double beta_bar_for(const ProblemConstants& problem, const AlgorithmParams& params,
                    const Kappas& kappas, double gamma) {
  OracleExtras extras;
  extras.gamma = gamma;
  return constants(problem, params, kappas, extras).beta_bar;
}

}  // namespace irsolve
