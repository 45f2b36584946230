#pragma once

#include <string>

#include "irsolve/core.hpp"
#include "irsolve/geometry.hpp"
#include "irsolve/oracle.hpp"

namespace irsolve {

/// Symmetric model matrix with spectral norm at most M.
struct HessianModel {
  Matrix matrix;
  bool norm_bound_ok = true;
  /// Factor applied to the raw candidate to enforce the norm cap (1 if none).
  double scale = 1.0;
};

/// Symmetrizes `candidate` and scales it down to spectral norm M if needed.
[[nodiscard]] HessianModel cap_norm(const Matrix& candidate, double M);

/// Gauss-Newton matrix J J^T (J is n x m) capped at norm M.
[[nodiscard]] HessianModel build_B(const Matrix& grad_h, double M, double sigma_min);

enum class HessianPolicy { zero, finite_difference };

[[nodiscard]] std::string to_string(HessianPolicy p);
[[nodiscard]] HessianPolicy hessian_policy_from_string(const std::string& s);

/// Model Hessian for the tangent subproblem. The finite-difference policy
/// charges 1 + n gradient evaluations to the ledger.
[[nodiscard]] HessianModel build_H(const InexactProblem& problem, const DecisionPoint& x_R,
                                   const PrecisionLevel& y, double M,
                                   HessianPolicy policy, EvaluationLedger& ledger);

struct SolveCertificate {
  /// Model value at the returned point (the model is zero at the center).
  double model_decrease = 0.0;
  /// Projected-gradient residual of the model at the returned point.
  double stationarity_residual = 0.0;
  double step_norm = 0.0;
  /// |A step|; zero for the restoration subproblem.
  double tangent_violation = 0.0;
  /// residual / step_norm (0 for a zero step with zero residual, inf otherwise).
  double kappa_ratio = 0.0;
  /// tangent_violation / step_norm^2.
  double kappa_T_ratio = 0.0;
  /// Returned step length over the exact 1-D minimizer length along the same
  /// direction, clamped to the feasible segment.
  double kappa_phi = 1.0;
  /// Largest Dykstra residual met while projecting onto the tangent set.
  double projection_residual = 0.0;
  int iterations = 0;
  bool flagged = false;
};

struct QpResult {
  DecisionPoint point;
  SolveCertificate certificate;
};

/// g^T d + 1/2 d^T (B + sigma I) d
[[nodiscard]] double restoration_model(const Vector& grad_c, const Matrix& B, double sigma,
                                       const Vector& d);
/// g^T d + 1/2 d^T H d + mu |d|^2
[[nodiscard]] double tangent_model(const Vector& grad_f, const Matrix& H, double mu,
                                   const Vector& d);

/// Approximate minimizer over the box of the restoration model centered at
/// z_center, by projected gradient with backtracking. The certificate is
/// unflagged iff model value <= 0 and residual <= kappa_R |d|.
[[nodiscard]] QpResult solve_restoration_qp(const Vector& grad_c, const HessianModel& B,
                                            double sigma, const DecisionPoint& z_center,
                                            const BoxPolytope& box, double kappa_R,
                                            int max_iters = 500);

/// Approximate minimizer over D of the tangent model centered at D.center().
/// The certificate is unflagged iff model value <= 0,
/// |A d| <= kappa_T |d|^2 and residual <= kappa |d|.
[[nodiscard]] QpResult solve_tangent_qp(const Vector& grad_f, const HessianModel& H, double mu,
                                        const TangentSet& D, double kappa_T, double kappa,
                                        int max_iters = 500);

}  // namespace irsolve
