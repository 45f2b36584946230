#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "irsolve/suite.hpp"
#include "support.hpp"

using namespace irsolve;
using irsolve::testing::sample;
using irsolve::testing::vec;

namespace {

// Central differences of a scalar function.
Vector fd_gradient(const std::function<double(const Vector&)>& fn, const Vector& x, double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (fn(xp) - fn(xm)) / (2 * h);
  }
  return g;
}

// Shrinks the box so central differences stay inside it.
BoxPolytope inner(const BoxPolytope& b, double h) {
  return BoxPolytope(b.lower().array() + 2 * h, b.upper().array() - 2 * h);
}

class SuiteOracle : public ::testing::TestWithParam<std::string> {};

}  // namespace

TEST_P(SuiteOracle, GradientsMatchCentralDifferences) {
  const SuiteEntry e = make_problem(GetParam());
  const InexactProblem& p = *e.problem;
  std::mt19937_64 rng(7);
  const double h = 1e-5;
  const BoxPolytope box = inner(p.domain(), h);
  EvaluationLedger led;
  for (const PrecisionLevel y : {PrecisionLevel(0, 0), PrecisionLevel(0.5, 0.5)}) {
    for (int s = 0; s < 100; ++s) {
      const Vector x = sample(box, rng);
      const Vector gf = p.eval_grad_f(x, y, led);
      const Vector fd = fd_gradient([&](const Vector& z) { return p.eval_f(z, y, led); }, x, h);
      EXPECT_LE((gf - fd).lpNorm<Eigen::Infinity>(), 1e-6);
      const Matrix J = p.eval_grad_h(x, y, led);
      for (Eigen::Index i = 0; i < p.num_constraints(); ++i) {
        const Vector fdi =
            fd_gradient([&](const Vector& z) { return p.eval_h(z, y, led)[i]; }, x, h);
        EXPECT_LE((J.col(i) - fdi).lpNorm<Eigen::Infinity>(), 1e-6);
      }
    }
  }
}

TEST_P(SuiteOracle, ExactLevelIsGroundTruthBitwise) {
  const SuiteEntry e = make_problem(GetParam());
  const InexactProblem& p = *e.problem;
  std::mt19937_64 rng(11);
  EvaluationLedger led;
  const PrecisionLevel exact(0, 0);
  for (int s = 0; s < 100; ++s) {
    const Vector x = sample(p.domain(), rng);
    const double f = p.eval_f(x, exact, led);
    EXPECT_EQ(f, *p.exact_f(x));
    EXPECT_EQ(f, p.eval_f(x, exact, led));
    const Vector hv = p.eval_h(x, exact, led);
    EXPECT_TRUE((hv.array() == p.exact_h(x)->array()).all());
  }
}

constexpr double kEps = std::numeric_limits<double>::epsilon();

TEST_P(SuiteOracle, ErrorBoundedByNoiseScaleTimesPrecision) {
  const SuiteEntry e = make_problem(GetParam());
  const SyntheticProblem& p = *e.problem;
  std::mt19937_64 rng(13);
  EvaluationLedger led;
  for (const double g : {0.1, 0.5, 1.0}) {
    const PrecisionLevel y(g, g);
    for (int s = 0; s < 100; ++s) {
      const Vector x = sample(p.domain(), rng);
      // The noise is added in floating point, so one rounding of the sum is allowed.
      const double F = *p.exact_f(x);
      const Vector H = *p.exact_h(x);
      const double ulp_f = 2 * kEps * std::max(1.0, std::abs(F));
      const double ulp_h = 2 * kEps * std::max(1.0, H.lpNorm<Eigen::Infinity>());
      EXPECT_LE(std::abs(p.eval_f(x, y, led) - F), p.noise_scale_f() * g + ulp_f);
      const Vector dh = p.eval_h(x, y, led) - H;
      EXPECT_LE(dh.lpNorm<Eigen::Infinity>(), p.noise_scale_h() * g + ulp_h);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Suite, SuiteOracle, ::testing::Values("p1", "p2", "p3", "p4", "p1pdp"));

TEST(Oracle, LedgerCountsEveryCall) {
  const SuiteEntry e = make_problem("p1");
  EvaluationLedger led;
  const PrecisionLevel y(0.1, 0.1);
  (void)e.problem->eval_f(e.x0, y, led);
  (void)e.problem->eval_f(e.x0, y, led);
  (void)e.problem->eval_grad_f(e.x0, y, led);
  (void)e.problem->eval_h(e.x0, y, led);
  (void)e.problem->eval_grad_h(e.x0, y, led);
  EXPECT_EQ(led, (EvaluationLedger{2, 1, 1, 1}));
  EXPECT_EQ(led.total(), 5u);
}

TEST(Oracle, OutsideDomainThrowsWithoutCharging) {
  const SuiteEntry e = make_problem("p1");
  EvaluationLedger led;
  Vector x = e.x0;
  x[0] = 11.0;
  EXPECT_THROW((void)e.problem->eval_f(x, PrecisionLevel(0, 0), led), DomainError);
  EXPECT_EQ(led.total(), 0u);
}

TEST(Oracle, P1ValuesAtMinimizer) {
  const SuiteEntry e = make_problem("p1");
  const SyntheticProblem& p = *e.problem;
  EvaluationLedger led;
  const Vector xs = *e.minimizer;
  EXPECT_EQ(p.eval_f(xs, PrecisionLevel(0, 0), led), 0.0);
  const double expected = 0.1 * p.noise_scale_f() * p.noise_f().value(xs);
  EXPECT_NEAR(p.eval_f(xs, PrecisionLevel(0.1, 0), led), expected, 1e-30);
  EXPECT_EQ(p.eval_h(xs, PrecisionLevel(0, 0), led).norm(), 0.0);
  EXPECT_TRUE((p.eval_grad_h(e.x0, PrecisionLevel(0, 0), led).array() == 1.0).all());
}

TEST(Oracle, RefineContract) {
  const SuiteEntry e = make_problem("p1");
  const InexactProblem& p = *e.problem;
  const PrecisionLevel y = p.refine(PrecisionLevel(0.2, 0.4), 0.1, 0.2);
  EXPECT_EQ(y.gf, 0.1);
  EXPECT_EQ(y.gh, 0.2);
  EXPECT_TRUE(p.refine(PrecisionLevel(0, 0), 0.1, 0.1).exact());
  EXPECT_THROW((void)p.refine(PrecisionLevel(0.2, 0.4), -0.1, 0.2), ContractError);
}

TEST(Suite, KnownFacts) {
  EvaluationLedger led;
  // P1 minimizer solves the KKT system of min |x - x*|^2 s.t. sum(x) = 0.
  const SuiteEntry p1 = make_problem("p1");
  EXPECT_NEAR(p1.minimizer->sum(), 0.0, 1e-15);
  // P3: |H| = x1^2 + 1 >= 1 everywhere.
  const SuiteEntry p3 = make_problem("p3");
  std::mt19937_64 rng(3);
  for (int s = 0; s < 100; ++s)
    EXPECT_GE(p3.problem->eval_h(sample(p3.problem->domain(), rng), PrecisionLevel(0, 0), led).norm(),
              1.0);
  // P4 starts exactly feasible and exact.
  const SuiteEntry p4 = make_problem("p4");
  EXPECT_EQ(p4.problem->eval_h(p4.x0, p4.y0, led).norm() + precision_g(p4.y0), 0.0);
  EXPECT_THROW((void)make_problem("p9"), ConfigError);
}

// The suite's noise scales are tiny; rerun the oracle checks with a large one.
TEST(Oracle, LargeNoiseStillSoundAndDifferentiable) {
  for (const std::string id : {"p1", "p2"}) {
    SyntheticProblem::Definition def = make_problem(id).problem->definition();
    def.noise_scale_f = 0.3;
    def.noise_scale_h = 0.3;
    const SyntheticProblem p(def);
    std::mt19937_64 rng(17);
    const double h = 1e-5;
    const BoxPolytope box = inner(p.domain(), h);
    EvaluationLedger led;
    const PrecisionLevel y(0.7, 0.4);
    for (int s = 0; s < 100; ++s) {
      const Vector x = sample(box, rng);
      EXPECT_LE(std::abs(p.eval_f(x, y, led) - *p.exact_f(x)), 0.3 * 0.7);
      EXPECT_LE((p.eval_h(x, y, led) - *p.exact_h(x)).lpNorm<Eigen::Infinity>(), 0.3 * 0.4);
      const Vector fd = fd_gradient([&](const Vector& z) { return p.eval_f(z, y, led); }, x, h);
      EXPECT_LE((p.eval_grad_f(x, y, led) - fd).lpNorm<Eigen::Infinity>(), 1e-6);
      const Vector fdh =
          fd_gradient([&](const Vector& z) { return p.eval_h(z, y, led)[0]; }, x, h);
      EXPECT_LE((p.eval_grad_h(x, y, led).col(0) - fdh).lpNorm<Eigen::Infinity>(), 1e-6);
      // Gradient perturbation bounded by scale * g * |grad eta|.
      const Vector dg = p.eval_grad_f(x, y, led) - fd_gradient(
                                                        [&](const Vector& z) { return *p.exact_f(z); }, x, h);
      EXPECT_LE(dg.norm(), 0.3 * 0.7 * p.noise_f().gradient_bound() + 1e-6);
    }
  }
}
