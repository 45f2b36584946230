#include "irsolve/suite.hpp"

#include <cmath>

#include "irsolve/theory.hpp"

namespace irsolve {

namespace {

// Bounds of the exact functions over the box.
struct ExactBounds {
  double F_max;  // |F|
  double G_F;    // |grad F|
  double Hs_F;   // |hess F|
  double H_max;  // |H|
  double J_max;  // |grad H|
  double Lip_J;  // Lipschitz constant of grad H
};

SmoothNoise noise(std::initializer_list<double> w1, double p1, std::initializer_list<double> w2,
                  double p2) {
  SmoothNoise eta;
  eta.w1 = Eigen::Map<const Vector>(w1.begin(), static_cast<Eigen::Index>(w1.size()));
  eta.w2 = Eigen::Map<const Vector>(w2.begin(), static_cast<Eigen::Index>(w2.size()));
  eta.p1 = p1;
  eta.p2 = p2;
  return eta;
}

// Constants valid for every noise scale up to `cap` and every level with
// g_f, g_h <= C_g = 1.
ProblemConstants declare(const ExactBounds& b, const SmoothNoise& eta_f,
                         const std::vector<SmoothNoise>& eta_h, double cap) {
  const double C_g = 1.0;
  const double s = cap * C_g;
  const double sqrt_m = std::sqrt(static_cast<double>(eta_h.size()));
  double G1h = 0.0;
  for (const auto& e : eta_h) G1h = std::max(G1h, e.gradient_bound());

  const double h_max = b.H_max + s * sqrt_m;
  const double J_max = b.J_max + s * sqrt_m * G1h;
  const double Lip_J = b.Lip_J + s * sqrt_m * G1h * G1h;

  ProblemConstants pc;
  pc.C_f = b.F_max + s;
  pc.L_f = std::max(b.G_F + s * eta_f.gradient_bound(), b.Hs_F + s * eta_f.hessian_bound());
  pc.C_h = std::max(h_max, J_max);
  pc.L_h = std::max(J_max, Lip_J);
  // grad c = J h, so Lip(grad c) <= |J| Lip(h) + |h| Lip(J).
  pc.L_c = J_max * J_max + h_max * Lip_J;
  pc.C_g = C_g;
  pc.provenance = Provenance::analytic;
  return pc;
}

// Declares constants and, for noisy problems, scales the noise to beta_bar / 2
// so the restricted deterioration bound holds from the first iteration with
// gamma = 0.5 and k_R = 0.
void finalize(SyntheticProblem::Definition& def, const ExactBounds& b,
              const AlgorithmParams& params, bool noisy) {
  constexpr double gamma = 0.5;
  def.constants = declare(b, def.noise_f, def.noise_h, noisy ? kSuiteNoiseCap : 0.0);
  double s = 0.0;
  if (noisy) {
    const double beta_bar = beta_bar_for(def.constants, params, Kappas::from_params(params), gamma);
    s = std::min(beta_bar / 2.0, kSuiteNoiseCap);
  }
  def.noise_scale_f = s;
  def.noise_scale_h = s;
  def.assumptions = OracleAssumptions{2.0 * s, gamma, 0};
}

Vector p1_minimizer() {
  Vector x(5);
  x << 0.5, 1.5, 0.0, -1.5, -0.5;
  return x;
}

// F = |x - x*|^2 with x* on the hyperplane sum(x) = 0, box [-10, 10]^5.
SyntheticProblem::Definition p1_definition(const AlgorithmParams& params) {
  const Eigen::Index n = 5;
  const Vector x_star = p1_minimizer();
  SyntheticProblem::Definition def{
      .id = "p1",
      .box = BoxPolytope(Vector::Constant(n, -10.0), Vector::Constant(n, 10.0)),
  };
  def.F = [x_star](const Vector& x) { return (x - x_star).squaredNorm(); };
  def.grad_F = [x_star](const Vector& x) -> Vector { return 2.0 * (x - x_star); };
  def.H = [](const Vector& x) -> Vector { return Vector::Constant(1, x.sum()); };
  def.grad_H = [n](const Vector&) -> Matrix { return Matrix::Ones(n, 1); };
  def.m = 1;
  def.noise_f = noise({0.7, -0.4, 0.3, 0.5, -0.6}, 0.3, {-0.2, 0.6, 0.4, -0.3, 0.5}, 1.1);
  def.noise_h = {noise({0.3, 0.5, -0.7, 0.2, 0.4}, -0.5, {0.6, -0.1, 0.2, 0.5, -0.4}, 0.8)};
  def.exact_below = 0.006;

  double far_sq = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = 10.0 + std::abs(x_star[i]);
    far_sq += d * d;
  }
  const ExactBounds b{far_sq, 2.0 * std::sqrt(far_sq), 2.0, 50.0, std::sqrt(5.0), 0.0};
  finalize(def, b, params, true);
  return def;
}

// F = (x1 - 1)^2 + 5 (x2 - x1^2)^2 on the unit circle, box [-2, 2]^2.
SyntheticProblem::Definition p2_definition(const AlgorithmParams& params) {
  SyntheticProblem::Definition def{
      .id = "p2",
      .box = BoxPolytope(Vector::Constant(2, -2.0), Vector::Constant(2, 2.0)),
  };
  def.F = [](const Vector& x) {
    const double u = x[1] - x[0] * x[0];
    return (x[0] - 1.0) * (x[0] - 1.0) + 5.0 * u * u;
  };
  def.grad_F = [](const Vector& x) -> Vector {
    const double u = x[1] - x[0] * x[0];
    Vector g(2);
    g << 2.0 * (x[0] - 1.0) - 20.0 * x[0] * u, 10.0 * u;
    return g;
  };
  def.H = [](const Vector& x) -> Vector { return Vector::Constant(1, x.squaredNorm() - 1.0); };
  def.grad_H = [](const Vector& x) -> Matrix { return 2.0 * x; };
  def.m = 1;
  def.noise_f = noise({0.9, -0.5}, 0.2, {0.4, 0.7}, -0.6);
  def.noise_h = {noise({-0.6, 0.8}, 0.9, {0.5, 0.3}, 0.1)};
  def.exact_below = 0.006;

  // |x1 - 1| <= 3 and -6 <= x2 - x1^2 <= 2 on the box. The Hessian bound is
  // the Frobenius norm of the entrywise maxima (282, 40, 10).
  const double F_max = 9.0 + 5.0 * 36.0;
  const double G_F = std::hypot(2.0 * 3.0 + 20.0 * 2.0 * 6.0, 10.0 * 6.0);
  const double Hs_F = std::sqrt(282.0 * 282.0 + 2.0 * 40.0 * 40.0 + 10.0 * 10.0);
  const ExactBounds b{F_max, G_F, Hs_F, 7.0, 2.0 * std::sqrt(8.0), 2.0};
  finalize(def, b, params, true);
  return def;
}

// H = x1^2 + 1 has no zero. Noise-free.
SyntheticProblem::Definition p3_definition(const AlgorithmParams& params) {
  SyntheticProblem::Definition def{
      .id = "p3",
      .box = BoxPolytope(Vector::Constant(2, -1.0), Vector::Constant(2, 1.0)),
  };
  def.F = [](const Vector& x) { return x[0] + x[1]; };
  def.grad_F = [](const Vector&) -> Vector { return Vector::Ones(2); };
  def.H = [](const Vector& x) -> Vector { return Vector::Constant(1, x[0] * x[0] + 1.0); };
  def.grad_H = [](const Vector& x) -> Matrix {
    Matrix J(2, 1);
    J << 2.0 * x[0], 0.0;
    return J;
  };
  def.m = 1;
  def.noise_f = noise({0.0, 0.0}, 0.0, {0.0, 0.0}, 0.0);
  def.noise_h = {noise({0.0, 0.0}, 0.0, {0.0, 0.0}, 0.0)};
  const ExactBounds b{2.0, std::sqrt(2.0), 0.0, 2.0, 2.0, 2.0};
  finalize(def, b, params, false);
  return def;
}

}  // namespace

std::vector<std::string> problem_ids() { return {"p1", "p2", "p3", "p4", "p1pdp"}; }

AlgorithmParams suite_params() { return AlgorithmParams{}; }

SuiteEntry make_problem(const std::string& id, const AlgorithmParams& params) {
  params.validate();
  SuiteEntry e;
  if (id == "p1" || id == "p4" || id == "p1pdp") {
    auto def = p1_definition(params);
    def.id = id;
    e.minimizer = p1_minimizer();
    if (id == "p4") {
      e.x0 = p1_minimizer();
      e.y0 = PrecisionLevel(0.0, 0.0);
      e.description = "P1 started at its exact, exactly evaluated minimizer";
    } else {
      e.x0 = Vector(5);
      e.x0 << 3.0, -2.0, 4.0, 1.0, -5.0;
      e.y0 = PrecisionLevel(0.01, 0.01);
      e.description = "convex quadratic, one linear constraint, box [-10,10]^5";
    }
    if (id == "p1pdp") {
      def.has_pdp = true;
      e.description += ", restoration by a problem-dependent procedure";
    }
    e.expected = RunStatus::Converged;
    e.problem = std::make_shared<const SyntheticProblem>(std::move(def));
    return e;
  }
  if (id == "p2") {
    e.problem = std::make_shared<const SyntheticProblem>(p2_definition(params));
    e.x0 = Vector(2);
    e.x0 << 1.5, 1.2;
    e.y0 = PrecisionLevel(0.01, 0.01);
    e.expected = RunStatus::Converged;
    e.description = "Rosenbrock-type objective on the unit circle, box [-2,2]^2";
    return e;
  }
  if (id == "p3") {
    e.problem = std::make_shared<const SyntheticProblem>(p3_definition(params));
    e.x0 = Vector(2);
    e.x0 << 0.8, 0.3;
    e.y0 = PrecisionLevel(0.1, 0.1);
    e.expected = RunStatus::RestorationFailure;
    e.description = "infeasible constraint x1^2 + 1 = 0, box [-1,1]^2";
    return e;
  }
  throw ConfigError("unknown problem '" + id + "'");
}

std::vector<SuiteEntry> make_suite(const AlgorithmParams& params) {
  std::vector<SuiteEntry> out;
  for (const auto& id : problem_ids()) out.push_back(make_problem(id, params));
  return out;
}

}  // namespace irsolve
