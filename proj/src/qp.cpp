#include "irsolve/qp.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace irsolve {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double spectral_norm_sym(const Matrix& S) {
  if (S.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Largest t >= 0 with center + t v inside the box.
double max_box_step(const Vector& center, const Vector& v, const BoxPolytope& box) {
  double t = kInf;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] > 0) t = std::min(t, (box.upper()[i] - center[i]) / v[i]);
    if (v[i] < 0) t = std::min(t, (box.lower()[i] - center[i]) / v[i]);
  }
  return std::max(t, 0.0);
}

// |d| over the length of the exact minimizer of the model along d / |d|,
// restricted to the part of the ray inside the box.
double line_minimizer_ratio(const Vector& grad, const Matrix& Q, const Vector& d,
                            const Vector& center, const BoxPolytope& box) {
  const double len = d.norm();
  if (len == 0.0) return 1.0;
  const Vector v = d / len;
  const double slope = grad.dot(v);
  const double curv = v.dot(Q * v);
  if (!(curv > 0) || slope >= 0) return kInf;
  const double t = std::min(-slope / curv, max_box_step(center, v, box));
  return t > 0 ? len / t : kInf;
}

double kappa_ratio(double residual, double step) {
  if (step > 0) return residual / step;
  return residual == 0.0 ? 0.0 : kInf;
}

struct PgProblem {
  const Vector& grad;  // linear term
  const Matrix& Q;     // quadratic term, model = grad.d + 1/2 d.Q.d
  const Vector& center;
};

double model_value(const PgProblem& pb, const Vector& z) {
  const Vector d = z - pb.center;
  return pb.grad.dot(d) + 0.5 * d.dot(pb.Q * d);
}

Vector model_gradient(const PgProblem& pb, const Vector& z) {
  return pb.grad + pb.Q * (z - pb.center);
}

// Projected gradient with backtracking from the center. `project` maps a
// vector onto the feasible set.
template <class Project>
Vector projected_gradient(const PgProblem& pb, Project&& project, int max_iters,
                          int& iterations) {
  const double L = std::max(spectral_norm_sym(pb.Q), 1e-300);
  Vector z = pb.center;
  iterations = 0;
  for (int it = 1; it <= max_iters; ++it) {
    iterations = it;
    const Vector g = model_gradient(pb, z);
    const double qz = model_value(pb, z);
    double t = 1.0 / L;
    Vector zn = project(z - t * g);
    for (int bt = 0; bt < 60; ++bt) {
      const Vector dz = zn - z;
      const double bound = qz + g.dot(dz) + dz.squaredNorm() / (2.0 * t);
      if (model_value(pb, zn) <= bound + 1e-15 * std::abs(qz)) break;
      t *= 0.5;
      zn = project(z - t * g);
    }
    const double change = (zn - z).norm();
    z = zn;
    const double step = (z - pb.center).norm();
    const double res = (project(z - model_gradient(pb, z)) - z).norm();
    if (change == 0.0 || res <= 1e-11 * step || res <= 1e-15 * (1.0 + pb.grad.norm())) break;
  }
  return z;
}

}  // namespace

HessianModel cap_norm(const Matrix& candidate, double M) {
  if (candidate.rows() != candidate.cols()) throw ContractError("Hessian model must be square");
  if (!(M >= 1)) throw ConfigError("M must be >= 1");
  HessianModel out;
  out.matrix = 0.5 * (candidate + candidate.transpose());
  const double norm = spectral_norm_sym(out.matrix);
  if (norm > M) {
    out.scale = M / norm;
    out.matrix *= out.scale;
  }
  out.norm_bound_ok = spectral_norm_sym(out.matrix) <= M * (1.0 + 1e-12);
  return out;
}

HessianModel build_B(const Matrix& grad_h, double M, double sigma_min) {
  if (!(M >= 1) || !(sigma_min > 0)) throw ConfigError("build_B needs M >= 1 and sigma_min > 0");
  if (M * sigma_min < 1)
    throw ConfigError("M * sigma_min < 1: no admissible restoration model exists");
  return cap_norm(grad_h * grad_h.transpose(), M);
}

std::string to_string(HessianPolicy p) {
  return p == HessianPolicy::zero ? "zero" : "finite_difference";
}

HessianPolicy hessian_policy_from_string(const std::string& s) {
  if (s == "zero") return HessianPolicy::zero;
  if (s == "finite_difference") return HessianPolicy::finite_difference;
  throw ConfigError("unknown hessian policy '" + s + "'");
}

HessianModel build_H(const InexactProblem& problem, const DecisionPoint& x_R,
                     const PrecisionLevel& y, double M, HessianPolicy policy,
                     EvaluationLedger& ledger) {
  const Eigen::Index n = problem.dim();
  if (policy == HessianPolicy::zero) return cap_norm(Matrix::Zero(n, n), M);

  const BoxPolytope& box = problem.domain();
  const Vector g0 = problem.eval_grad_f(x_R, y, ledger);
  Matrix Hfd(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double step = 1e-6 * (1.0 + std::abs(x_R[i]));
    // Forward difference, backward when the forward point leaves the box.
    double s = step;
    if (x_R[i] + s > box.upper()[i]) s = -step;
    DecisionPoint xp = x_R;
    xp[i] += s;
    if (!box.contains(xp)) {
      Hfd.col(i).setZero();
      continue;
    }
    Hfd.col(i) = (problem.eval_grad_f(xp, y, ledger) - g0) / s;
  }
  return cap_norm(Hfd, M);
}

double restoration_model(const Vector& grad_c, const Matrix& B, double sigma, const Vector& d) {
  return grad_c.dot(d) + 0.5 * d.dot(B * d) + 0.5 * sigma * d.squaredNorm();
}

double tangent_model(const Vector& grad_f, const Matrix& H, double mu, const Vector& d) {
  return grad_f.dot(d) + 0.5 * d.dot(H * d) + mu * d.squaredNorm();
}

QpResult solve_restoration_qp(const Vector& grad_c, const HessianModel& B, double sigma,
                              const DecisionPoint& z_center, const BoxPolytope& box,
                              double kappa_R, int max_iters) {
  const Eigen::Index n = z_center.size();
  if (grad_c.size() != n || B.matrix.rows() != n || box.dim() != n)
    throw ContractError("solve_restoration_qp: dimension mismatch");
  if (!(sigma > 0)) throw ContractError("solve_restoration_qp: sigma must be > 0");
  if (!box.contains(z_center, membership_tol(z_center)))
    throw ContractError("solve_restoration_qp: center outside the box");
  require_finite(grad_c, "restoration gradient");

  const Matrix Q = B.matrix + sigma * Matrix::Identity(n, n);
  const PgProblem pb{grad_c, Q, z_center};
  const auto project = [&box](const Vector& v) { return project_box(v, box); };

  QpResult out;
  int iters = 0;
  Vector z = z_center;
  if (grad_c.norm() > 0) z = projected_gradient(pb, project, max_iters, iters);

  const auto certify = [&](const Vector& zz) {
    SolveCertificate c;
    const Vector d = zz - z_center;
    c.model_decrease = restoration_model(grad_c, B.matrix, sigma, d);
    c.stationarity_residual = (project(zz - model_gradient(pb, zz)) - zz).norm();
    c.step_norm = d.norm();
    c.kappa_ratio = kappa_ratio(c.stationarity_residual, c.step_norm);
    c.kappa_phi = line_minimizer_ratio(grad_c, Q, d, z_center, box);
    c.iterations = iters;
    return c;
  };
  out.point = z;
  out.certificate = certify(z);
  const SolveCertificate& c = out.certificate;
  const bool ok = c.model_decrease <= 0 && c.stationarity_residual <= kappa_R * c.step_norm;
  if (!ok && c.step_norm > 0) {
    out.point = z_center;
    out.certificate = certify(z_center);
    out.certificate.flagged = true;
  } else if (!ok) {
    out.certificate.flagged = true;
  }
  return out;
}

QpResult solve_tangent_qp(const Vector& grad_f, const HessianModel& H, double mu,
                          const TangentSet& D, double kappa_T, double kappa, int max_iters) {
  const DecisionPoint& x_R = D.center();
  const Eigen::Index n = x_R.size();
  if (grad_f.size() != n || H.matrix.rows() != n)
    throw ContractError("solve_tangent_qp: dimension mismatch");
  if (!(mu > 0)) throw ContractError("solve_tangent_qp: mu must be > 0");
  if (!D.box().contains(x_R, membership_tol(x_R)))
    throw ContractError("solve_tangent_qp: center outside the box");
  require_finite(grad_f, "tangent gradient");

  const Matrix Q = H.matrix + 2.0 * mu * Matrix::Identity(n, n);
  const PgProblem pb{grad_f, Q, x_R};
  double proj_res = 0.0;
  const auto project = [&D, &proj_res](const Vector& v) {
    TangentProjection tp = project_tangent(v, D);
    proj_res = std::max(proj_res, tp.residual);
    return tp.point;
  };

  int iters = 0;
  Vector z = x_R;
  if (grad_f.norm() > 0) z = projected_gradient(pb, project, max_iters, iters);

  const auto certify = [&](const Vector& zz) {
    SolveCertificate c;
    const Vector d = zz - x_R;
    c.model_decrease = tangent_model(grad_f, H.matrix, mu, d);
    c.stationarity_residual = (project(zz - model_gradient(pb, zz)) - zz).norm();
    c.step_norm = d.norm();
    c.tangent_violation = D.affine_violation(zz);
    c.kappa_ratio = kappa_ratio(c.stationarity_residual, c.step_norm);
    c.kappa_T_ratio = c.step_norm > 0 ? c.tangent_violation / (c.step_norm * c.step_norm)
                                      : (c.tangent_violation == 0.0 ? 0.0 : kInf);
    c.kappa_phi = line_minimizer_ratio(grad_f, Q, d, x_R, D.box());
    c.iterations = iters;
    c.projection_residual = proj_res;
    return c;
  };

  QpResult out;
  out.point = z;
  out.certificate = certify(z);
  const SolveCertificate& c = out.certificate;
  const bool ok = c.model_decrease <= 0 &&
                  c.tangent_violation <= kappa_T * c.step_norm * c.step_norm &&
                  c.stationarity_residual <= kappa * c.step_norm;
  if (!ok && c.step_norm > 0) {
    out.point = x_R;
    out.certificate = certify(x_R);
    out.certificate.flagged = true;
  } else if (!ok) {
    out.certificate.flagged = true;
  }
  return out;
}

}  // namespace irsolve
