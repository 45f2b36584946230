#pragma once

// Independent reference computations for the QP layer.

#include <limits>
#include <random>

#include "irsolve/geometry.hpp"
#include "irsolve/qp.hpp"
#include "support.hpp"

namespace irsolve::testing {

struct RestorationInstance {
  Vector grad_c;
  HessianModel B;
  double sigma;
  Vector center;
  BoxPolytope box;
};

struct TangentInstance {
  Vector grad_f;
  HessianModel H;
  double mu;
  TangentSet D;
};

inline RestorationInstance random_restoration_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Vector lo = gaussian(2, rng, 0.5);
  const Vector hi = lo + Vector::Constant(2, 1.0);
  BoxPolytope box(lo, hi);
  const Vector center = sample(box, rng);
  const Matrix J = Matrix::NullaryExpr(2, 1, [&]() { return gaussian(1, rng)[0]; });
  const double M = 10.0;
  return {gaussian(2, rng, 2.0), build_B(J, M, 0.1), 0.1 + 0.9 * u(rng), center, box};
}

// 3-D point, one linear constraint fixing a coordinate: the tangent set is an
// axis-aligned rectangle, so a grid covers its edges exactly.
inline TangentInstance random_tangent_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Vector lo = gaussian(3, rng, 0.5);
  const BoxPolytope box(lo, lo + Vector::Constant(3, 1.0));
  const Vector center = sample(box, rng);
  Matrix A = Matrix::Zero(1, 3);
  A(0, static_cast<Eigen::Index>(u(rng) * 3.0) % 3) = 0.5 + u(rng);
  Matrix Hc = Matrix::NullaryExpr(3, 3, [&]() { return gaussian(1, rng)[0]; });
  return {gaussian(3, rng, 2.0), cap_norm(Hc + Hc.transpose(), 2.0), 0.5 + 2.0 * u(rng),
          TangentSet(box, A, center)};
}

// Minimum of the restoration model over a 100 x 100 grid of the box.
inline double grid_min(const RestorationInstance& q) {
  double best = std::numeric_limits<double>::infinity();
  const BoxPolytope& b = q.box;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      Vector z(2);
      z[0] = b.lower()[0] + (b.upper()[0] - b.lower()[0]) * i / 99.0;
      z[1] = b.lower()[1] + (b.upper()[1] - b.lower()[1]) * j / 99.0;
      best = std::min(best, restoration_model(q.grad_c, q.B.matrix, q.sigma, z - q.center));
    }
  }
  return best;
}

// Minimum of the tangent model over a 100 x 100 grid of the rectangle.
inline double grid_min(const TangentInstance& q) {
  const Vector& c = q.D.center();
  const BoxPolytope& b = q.D.box();
  Eigen::Index fixed = 0;
  q.D.A().row(0).cwiseAbs().maxCoeff(&fixed);
  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < 3; ++i)
    if (i != fixed) free.push_back(i);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      Vector z = c;
      const Eigen::Index a = free[0], e = free[1];
      z[a] = b.lower()[a] + (b.upper()[a] - b.lower()[a]) * i / 99.0;
      z[e] = b.lower()[e] + (b.upper()[e] - b.lower()[e]) * j / 99.0;
      best = std::min(best, tangent_model(q.grad_f, q.H.matrix, q.mu, z - c));
    }
  }
  return best;
}

}  // namespace irsolve::testing
