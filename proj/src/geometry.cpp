#include "irsolve/geometry.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace irsolve {

double membership_tol(const Vector& x) { return 1e-8 * (1.0 + x.norm()); }

TangentSet::TangentSet(BoxPolytope box, Matrix A, DecisionPoint center)
    : box_(std::move(box)), A_(std::move(A)), center_(std::move(center)) {
  if (A_.cols() != box_.dim() || center_.size() != box_.dim())
    throw ContractError("tangent set dimensions do not match the box");
  require_finite(center_, "tangent set center");
  if (!A_.allFinite()) throw ContractError("tangent set matrix has non-finite entries");
  if (A_.rows() == 0) {
    row_projector_ = Matrix::Zero(A_.cols(), A_.cols());
  } else {
    row_projector_ = A_.completeOrthogonalDecomposition().pseudoInverse() * A_;
  }
}

Vector TangentSet::project_affine(const Vector& z) const {
  return z - row_projector_ * (z - center_);
}

double TangentSet::affine_violation(const Vector& x) const {
  if (A_.rows() == 0) return 0.0;
  return (A_ * (x - center_)).norm();
}

bool TangentSet::contains(const Vector& x, double tol) const {
  return box_.contains(x, tol) && affine_violation(x) <= tol;
}

DecisionPoint project_box(const Vector& z, const BoxPolytope& box) {
  if (z.size() != box.dim()) throw ContractError("project_box: dimension mismatch");
  require_finite(z, "project_box input");
  return z.cwiseMax(box.lower()).cwiseMin(box.upper());
}

Vector project_affine(const Vector& z, const Matrix& A, const Vector& rhs) {
  if (A.cols() != z.size() || A.rows() != rhs.size())
    throw ContractError("project_affine: dimension mismatch");
  if (A.rows() == 0) return z;
  return z - A.completeOrthogonalDecomposition().solve(A * z - rhs);
}

namespace {

// Moves a near-feasible point exactly onto the affine set, first by a plain
// affine projection and otherwise with the coordinates at their bounds held
// fixed. Keeps the input if neither candidate stays in the box.
Vector polish(const Vector& x, const TangentSet& D) {
  if (D.A().rows() == 0) return x;
  const Vector full = D.project_affine(x);
  if (D.box().contains(full)) return full;

  const BoxPolytope& box = D.box();
  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] > box.lower()[i] && x[i] < box.upper()[i]) free.push_back(i);
  }
  if (free.empty()) return x;
  const auto nf = static_cast<Eigen::Index>(free.size());
  Matrix A_free(D.A().rows(), nf);
  Vector x_free(nf);
  for (Eigen::Index j = 0; j < nf; ++j) {
    A_free.col(j) = D.A().col(free[j]);
    x_free[j] = x[free[j]];
  }
  const Vector residual = D.A() * (x - D.center());
  const Vector corr = A_free.completeOrthogonalDecomposition().solve(residual);
  Vector out = x;
  for (Eigen::Index j = 0; j < nf; ++j) out[free[j]] = x_free[j] - corr[j];
  if (!box.contains(out)) return x;
  if (D.affine_violation(out) > D.affine_violation(x)) return x;
  return out;
}

}  // namespace

TangentProjection project_tangent(const Vector& z, const TangentSet& D, double tol,
                                  int max_sweeps) {
  if (z.size() != D.box().dim()) throw ContractError("project_tangent: dimension mismatch");
  require_finite(z, "project_tangent input");
  const double scaled_tol = tol * (1.0 + z.norm());

  TangentProjection out;
  Vector x = z;
  Vector p = Vector::Zero(z.size());
  Vector q = Vector::Zero(z.size());
  double best = std::numeric_limits<double>::infinity();
  out.point = project_box(z, D.box());
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    const Vector y = D.project_affine(x + p);
    p = x + p - y;
    const Vector xn = project_box(y + q, D.box());
    q = y + q - xn;
    const double residual = std::max((xn - x).norm(), (y - xn).norm());
    x = xn;
    out.sweeps = sweep;
    if (residual < best) {
      best = residual;
      out.point = x;
      out.residual = residual;
    }
    if (residual <= scaled_tol) {
      out.point = x;
      out.residual = residual;
      out.converged = true;
      break;
    }
  }
  if (out.sweeps == max_sweeps && out.residual > scaled_tol) out.converged = false;
  out.point = polish(out.point, D);
  return out;
}

double stationarity_residual(const DecisionPoint& x, const Vector& grad, const BoxPolytope& box) {
  if (grad.size() != x.size()) throw ContractError("stationarity_residual: dimension mismatch");
  if (!box.contains(x, membership_tol(x)))
    throw ContractError("stationarity_residual: point is not in the box");
  return (project_box(x - grad, box) - x).norm();
}

double stationarity_residual(const DecisionPoint& x, const Vector& grad, const TangentSet& D) {
  if (grad.size() != x.size()) throw ContractError("stationarity_residual: dimension mismatch");
  if (!D.contains(x)) throw ContractError("stationarity_residual: point is not in the tangent set");
  return (project_tangent(x - grad, D).point - x).norm();
}

}  // namespace irsolve
