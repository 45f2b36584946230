#pragma once

#include "irsolve/core.hpp"

namespace irsolve {

/// Default membership slack, 1e-8 * (1 + |x|).
[[nodiscard]] double membership_tol(const Vector& x);

/// {x in box : A (x - center) = 0}. A is m x n (rows are constraint gradients
/// at the center).
class TangentSet {
 public:
  TangentSet(BoxPolytope box, Matrix A, DecisionPoint center);

  [[nodiscard]] const BoxPolytope& box() const { return box_; }
  [[nodiscard]] const Matrix& A() const { return A_; }
  [[nodiscard]] const DecisionPoint& center() const { return center_; }

  /// Exact projection onto the affine part.
  [[nodiscard]] Vector project_affine(const Vector& z) const;
  [[nodiscard]] double affine_violation(const Vector& x) const;
  [[nodiscard]] bool contains(const Vector& x, double tol) const;
  [[nodiscard]] bool contains(const Vector& x) const { return contains(x, membership_tol(x)); }

 private:
  BoxPolytope box_;
  Matrix A_;
  DecisionPoint center_;
  Matrix row_projector_;  // A^+ A
};

[[nodiscard]] DecisionPoint project_box(const Vector& z, const BoxPolytope& box);

/// argmin |x - z| subject to A x = rhs (minimum-norm correction when A is
/// rank deficient).
[[nodiscard]] Vector project_affine(const Vector& z, const Matrix& A, const Vector& rhs);

struct TangentProjection {
  DecisionPoint point;
  /// max of the last iterate change and the gap between the two partial
  /// projections; small only when both memberships hold.
  double residual = 0.0;
  int sweeps = 0;
  bool converged = true;
};

/// Dykstra's alternating projections between the affine set and the box.
[[nodiscard]] TangentProjection project_tangent(const Vector& z, const TangentSet& D,
                                                double tol = 1e-10, int max_sweeps = 10000);

/// |P_box(x - grad) - x|
[[nodiscard]] double stationarity_residual(const DecisionPoint& x, const Vector& grad,
                                           const BoxPolytope& box);
/// |P_D(x - grad) - x|
[[nodiscard]] double stationarity_residual(const DecisionPoint& x, const Vector& grad,
                                           const TangentSet& D);

}  // namespace irsolve
