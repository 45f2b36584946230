#include <gtest/gtest.h>

#include "irsolve/qp.hpp"
#include "irsolve/suite.hpp"
#include "oracles.hpp"

using namespace irsolve;
using namespace irsolve::testing;

namespace {

double spectral_norm(const Matrix& m) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues().cwiseAbs().maxCoeff();
}

// Recomputes every certificate field from the returned point.
void expect_restoration_certificate(const RestorationInstance& q, const QpResult& r) {
  const Vector d = r.point - q.center;
  const SolveCertificate& c = r.certificate;
  const double scale = 1e-12 * (1 + q.grad_c.norm());
  EXPECT_NEAR(c.model_decrease, restoration_model(q.grad_c, q.B.matrix, q.sigma, d), scale);
  EXPECT_NEAR(c.step_norm, d.norm(), 1e-12);
  const Vector grad_m = q.grad_c + (q.B.matrix + q.sigma * Matrix::Identity(2, 2)) * d;
  EXPECT_NEAR(c.stationarity_residual, stationarity_residual(r.point, grad_m, q.box), scale);
}

void expect_tangent_certificate(const TangentInstance& q, const QpResult& r) {
  const Vector d = r.point - q.D.center();
  const SolveCertificate& c = r.certificate;
  const double scale = 1e-12 * (1 + q.grad_f.norm());
  EXPECT_NEAR(c.model_decrease, tangent_model(q.grad_f, q.H.matrix, q.mu, d), scale);
  EXPECT_NEAR(c.step_norm, d.norm(), 1e-12);
  EXPECT_NEAR(c.tangent_violation, (q.D.A() * d).norm(), 1e-12);
  const Vector grad_m = q.grad_f + (q.H.matrix + 2 * q.mu * Matrix::Identity(3, 3)) * d;
  EXPECT_NEAR(c.stationarity_residual, stationarity_residual(r.point, grad_m, q.D), scale);
}

}  // namespace

TEST(BuildB, Examples) {
  const HessianModel zero = build_B(Matrix::Zero(3, 1), 10.0, 0.1);
  EXPECT_TRUE(zero.matrix.isZero());
  Matrix J(2, 1);
  J << 2, 0;  // |J J^T| = 4
  const HessianModel B = build_B(J, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(B.scale, 0.5);
  EXPECT_NEAR(spectral_norm(B.matrix), 2.0, 1e-12);
  EXPECT_THROW((void)build_B(J, 1.0, 0.5), ConfigError);
}

TEST(BuildB, InverseBoundHolds) {
  std::mt19937_64 rng(2);
  for (int s = 0; s < 100; ++s) {
    const Matrix J = Matrix::NullaryExpr(4, 2, [&]() { return gaussian(1, rng, 3.0)[0]; });
    const double M = 10.0, smin = 0.1;
    const HessianModel B = build_B(J, M, smin);
    EXPECT_LE(spectral_norm(B.matrix), M * (1 + 1e-12));
    const Matrix Binv = (B.matrix + smin * Matrix::Identity(4, 4)).inverse();
    EXPECT_LE(spectral_norm(Binv), M * (1 + 1e-12));
    EXPECT_TRUE(B.matrix.isApprox(B.matrix.transpose()));
  }
}

TEST(CapNorm, ScalesAndSymmetrizes) {
  Matrix m(2, 2);
  m << 3, 0, 0, -1;
  const HessianModel h = cap_norm(3.0 * m, 3.0);  // norm 9 -> 3
  EXPECT_NEAR(spectral_norm(h.matrix), 3.0, 1e-12);
  EXPECT_TRUE(h.matrix.isApprox(h.matrix.transpose()));
  Matrix a(2, 2);
  a << 0, 1, 0, 0;
  EXPECT_TRUE(cap_norm(a, 10).matrix.isApprox(cap_norm(a, 10).matrix.transpose()));
}

TEST(BuildH, DefaultIsZeroAndFdIsCapped) {
  const SuiteEntry e = make_problem("p2");
  EvaluationLedger led;
  const HessianModel z = build_H(*e.problem, e.x0, e.y0, 10.0, HessianPolicy::zero, led);
  EXPECT_TRUE(z.matrix.isZero());
  EXPECT_EQ(led.total(), 0u);
  const HessianModel fd = build_H(*e.problem, e.x0, e.y0, 10.0, HessianPolicy::finite_difference, led);
  EXPECT_LE(spectral_norm(fd.matrix), 10.0 * (1 + 1e-12));
  EXPECT_TRUE(fd.matrix.isApprox(fd.matrix.transpose()));
  EXPECT_GT(led.gradf_evals, 0u);
  EXPECT_EQ(hessian_policy_from_string(to_string(HessianPolicy::finite_difference)),
            HessianPolicy::finite_difference);
}

TEST(RestorationQp, Examples) {
  const HessianModel B0{Matrix::Zero(1, 1)};
  const BoxPolytope wide(vec({-100}), vec({100}));
  const QpResult still = solve_restoration_qp(vec({0}), B0, 1.0, vec({0}), wide, 10);
  EXPECT_EQ(still.point, vec({0}));
  EXPECT_EQ(still.certificate.model_decrease, 0.0);

  const QpResult free = solve_restoration_qp(vec({-2}), B0, 1.0, vec({0}), wide, 10);
  EXPECT_NEAR(free.point[0], 2.0, 1e-9);
  EXPECT_NEAR(free.certificate.model_decrease, -2.0, 1e-12);

  const BoxPolytope clamp(vec({-100}), vec({1}));
  const QpResult clamped = solve_restoration_qp(vec({-2}), B0, 1.0, vec({0}), clamp, 10);
  EXPECT_NEAR(clamped.point[0], 1.0, 1e-12);
  EXPECT_NEAR(clamped.certificate.model_decrease, -1.5, 1e-12);
  EXPECT_FALSE(clamped.certificate.flagged);
}

TEST(TangentQp, Examples) {
  const HessianModel H0{Matrix::Zero(2, 2)};
  Matrix A(1, 2);
  A << 0, 1;
  const BoxPolytope wide(Vector::Constant(2, -100), Vector::Constant(2, 100));
  const TangentSet D(wide, A, vec({0, 0}));
  const QpResult zero = solve_tangent_qp(vec({0, 0}), H0, 1.0, D, 10, 10);
  EXPECT_EQ(zero.point, vec({0, 0}));
  EXPECT_EQ(zero.certificate.model_decrease, 0.0);

  const QpResult step = solve_tangent_qp(vec({-2, 0}), H0, 1.0, D, 10, 10);
  EXPECT_LE((step.point - vec({1, 0})).norm(), 1e-8);

  const BoxPolytope tight(Vector::Constant(2, -100), vec({0.5, 100}));
  const TangentSet Dt(tight, A, vec({0, 0}));
  const QpResult clamped = solve_tangent_qp(vec({-2, 0}), H0, 1.0, Dt, 10, 10);
  EXPECT_LE((clamped.point - vec({0.5, 0})).norm(), 1e-8);
  EXPECT_NEAR(clamped.certificate.model_decrease, -0.75, 1e-8);
}

TEST(RestorationQp, GridOracleAndCertificates) {
  std::mt19937_64 rng(21);
  for (int s = 0; s < 40; ++s) {
    const RestorationInstance q = random_restoration_instance(rng);
    const QpResult r = solve_restoration_qp(q.grad_c, q.B, q.sigma, q.center, q.box, 10.0);
    EXPECT_LE(r.certificate.model_decrease, 0.0);
    EXPECT_TRUE(q.box.contains(r.point));
    EXPECT_NEAR(r.certificate.model_decrease, grid_min(q), 1e-3) << "instance " << s;
    expect_restoration_certificate(q, r);
    if (!r.certificate.flagged)
      EXPECT_LE(r.certificate.stationarity_residual, 10.0 * r.certificate.step_norm);
  }
}

TEST(TangentQp, GridOracleAndCertificates) {
  std::mt19937_64 rng(22);
  for (int s = 0; s < 40; ++s) {
    const TangentInstance q = random_tangent_instance(rng);
    const QpResult r = solve_tangent_qp(q.grad_f, q.H, q.mu, q.D, 10.0, 10.0);
    EXPECT_LE(r.certificate.model_decrease, 0.0);
    EXPECT_TRUE(q.D.contains(r.point));
    EXPECT_NEAR(r.certificate.model_decrease, grid_min(q), 1e-3) << "instance " << s;
    expect_tangent_certificate(q, r);
  }
}
