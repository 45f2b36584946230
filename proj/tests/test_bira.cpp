#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "irsolve/bira.hpp"
#include "irsolve/suite.hpp"

using namespace irsolve;

namespace {

BiraOptions options_for(const SuiteEntry& e) {
  BiraOptions o;
  o.x0 = e.x0;
  o.y0 = e.y0;
  return o;
}

// Minimizer of |x - c|^2 subject to sum(x) = 0 from the KKT system.
Vector p1_kkt_minimizer() {
  const Eigen::Index n = 5;
  Vector c(5);
  c << 0.5, 1.5, 0.0, -1.5, -0.5;
  Matrix K = Matrix::Zero(n + 1, n + 1);
  K.topLeftCorner(n, n) = 2.0 * Matrix::Identity(n, n);
  K.topRightCorner(n, 1).setOnes();
  K.bottomLeftCorner(1, n).setOnes();
  Vector rhs = Vector::Zero(n + 1);
  rhs.head(n) = 2.0 * c;
  const Vector sol = K.fullPivLu().solve(rhs);
  return sol.head(n);
}

// Minimizer of the P2 objective over the unit circle by dense angular search.
Vector p2_circle_minimizer() {
  const auto F = [](double t) {
    const double x = std::cos(t), y = std::sin(t);
    const double u = y - x * x;
    return (x - 1) * (x - 1) + 5 * u * u;
  };
  double best_t = 0.0, best = F(0.0);
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double t = -M_PI + 2 * M_PI * i / N;
    if (F(t) < best) best = F(t), best_t = t;
  }
  Vector x(2);
  x << std::cos(best_t), std::sin(best_t);
  return x;
}

}  // namespace

TEST(RestorationFailure, Examples) {
  EXPECT_TRUE(restoration_failure(1.0, 0.6, 0.0, 0.0, 0.5));
  EXPECT_FALSE(restoration_failure(1.0, 0.4, 0.4, 0.0, 0.5));
  EXPECT_FALSE(restoration_failure(0.0, 0.0, 0.0, 0.0, 0.5));
  // Too much precision gained for too little feasibility.
  EXPECT_TRUE(restoration_failure(1.0, 0.5, 2.0, 0.0, 0.5));
  EXPECT_THROW((void)restoration_failure(-1.0, 0.0, 0.0, 0.0, 0.5), ContractError);
}

TEST(Penalty, KeepsThetaWhenTestHolds) {
  EXPECT_TRUE(check_penalty(0.2, 1.0, 0.0, 1.0, 0.5, 0.0, 0.0, 0.5));
  EXPECT_EQ(update_penalty(0.2, 1.0, 0.0, 1.0, 0.5, 0.0, 0.0, 0.5), 0.2);
}

TEST(Penalty, QuotientEqualsRootWithoutPrecisionChange) {
  EXPECT_DOUBLE_EQ(penalty_quotient(1.0, 0.0, 1.0, 0.5, 0.0, 0.0, 0.5), 0.25);
  const double t = update_penalty(0.9, 1.0, 0.0, 1.0, 0.5, 0.0, 0.0, 0.5);
  EXPECT_NEAR(t, 0.25, 1e-15);
  EXPECT_LE(t, 0.25);
  EXPECT_TRUE(check_penalty(t, 1.0, 0.0, 1.0, 0.5, 0.0, 0.0, 0.5));
}

TEST(Penalty, RootBelowQuotientWhenPrecisionImproves) {
  // Merit test holds iff theta <= 0.55 / 3.
  EXPECT_NEAR(penalty_quotient(1.0, 0.0, 1.0, 0.5, 0.4, 0.0, 0.5), 1.35 / 3.8, 1e-15);
  EXPECT_FALSE(check_penalty(1.35 / 3.8, 1.0, 0.0, 1.0, 0.5, 0.4, 0.0, 0.5));
  const double t = update_penalty(0.9, 1.0, 0.0, 1.0, 0.5, 0.4, 0.0, 0.5);
  EXPECT_NEAR(t, 0.55 / 3.0, 1e-14);
  EXPECT_TRUE(check_penalty(t, 1.0, 0.0, 1.0, 0.5, 0.4, 0.0, 0.5));
}

TEST(Penalty, QuotientAloneCanBreakTheMeritTest) {
  // Test holds iff theta <= 0.5 / 1.8, below the quotient 1.8 / 4.4.
  const double q = penalty_quotient(1.0, 0.0, 1.0, 0.2, 0.5, 0.1, 0.5);
  EXPECT_NEAR(q, 1.8 / 4.4, 1e-15);
  EXPECT_FALSE(check_penalty(q, 1.0, 0.0, 1.0, 0.2, 0.5, 0.1, 0.5));
  const double t = update_penalty(0.9, 1.0, 0.0, 1.0, 0.2, 0.5, 0.1, 0.5);
  EXPECT_NEAR(t, 0.5 / 1.8, 1e-14);
  EXPECT_TRUE(check_penalty(t, 1.0, 0.0, 1.0, 0.2, 0.5, 0.1, 0.5));
}

TEST(Penalty, ExactRestorationKeepsTheta) {
  EXPECT_EQ(update_penalty(0.7, 3.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.5), 0.7);
}

TEST(Penalty, RandomUpdatesPassTheMeritTest) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int updated = 0;
  for (int i = 0; i < 2000; ++i) {
    const double r = 0.1 + 0.8 * U(rng);
    const double a = U(rng) + 1e-3;
    const double b = r * a * U(rng);
    const double g_k = U(rng);
    const double g_R = g_k * U(rng);
    if (restoration_failure(a, b, g_k, g_R, r)) continue;
    const double fR = 4 * U(rng) - 2, fk = 4 * U(rng) - 2;
    const double theta_k = 0.01 + 0.98 * U(rng);
    const double t = update_penalty(theta_k, fR, fk, a, b, g_k, g_R, r);
    EXPECT_GT(t, 0.0);
    EXPECT_LE(t, theta_k);
    EXPECT_TRUE(check_penalty(t, fR, fk, a, b, g_k, g_R, r));
    if (t < theta_k) ++updated;
  }
  EXPECT_GT(updated, 100);
}

TEST(Bira, P1ConvergesToKktMinimizer) {
  const SuiteEntry e = make_problem("p1");
  const RunReport rep = bira_run(*e.problem, suite_params(), options_for(e));
  ASSERT_EQ(rep.status, RunStatus::Converged);
  EXPECT_LE((rep.final_x - p1_kkt_minimizer()).norm(), 1e-3);
  EXPECT_LE(rep.final_infeasibility, rep.tol.eps_feas);
}

TEST(Bira, P2ConvergesToCircleMinimizer) {
  const SuiteEntry e = make_problem("p2");
  const RunReport rep = bira_run(*e.problem, suite_params(), options_for(e));
  ASSERT_EQ(rep.status, RunStatus::Converged);
  EXPECT_LE((rep.final_x - p2_circle_minimizer()).norm(), 1e-2);
}

TEST(Bira, P3EndsInRestorationFailure) {
  const SuiteEntry e = make_problem("p3");
  BiraOptions o = options_for(e);
  o.budget = 50;
  const RunReport rep = bira_run(*e.problem, suite_params(), o);
  EXPECT_EQ(rep.status, RunStatus::RestorationFailure);
  ASSERT_FALSE(rep.iterations.empty());
  EXPECT_LE(rep.iterations.size(), 50u);
  const IterationRecord& last = rep.iterations.back();
  EXPECT_EQ(last.restoration_status, RestorationStatus::PossibleInfeasibility);
  EXPECT_TRUE(std::isnan(last.mu_k));
  EXPECT_EQ(last.theta_after, last.theta_before);
}

TEST(Bira, P4ConvergesAtFirstIterate) {
  const SuiteEntry e = make_problem("p4");
  const RunReport rep = bira_run(*e.problem, suite_params(), options_for(e));
  EXPECT_EQ(rep.status, RunStatus::Converged);
  EXPECT_EQ(rep.iterations.size(), 1u);
  EXPECT_EQ(rep.iterations[0].restoration_status, RestorationStatus::TrivialReturn);
  EXPECT_LE((rep.final_x - *e.minimizer).norm(), 1e-12);
}

TEST(Bira, ExactP1AcceptsFirstAttempt) {
  SyntheticProblem::Definition def = make_problem("p1").problem->definition();
  def.noise_scale_f = def.noise_scale_h = 0.0;
  const SyntheticProblem p(def);
  const SuiteEntry e = make_problem("p1");
  const AlgorithmParams params = suite_params();
  const RunReport rep = bira_run(p, params, options_for(e));
  ASSERT_EQ(rep.status, RunStatus::Converged);
  for (const auto& it : rep.iterations) {
    EXPECT_EQ(it.ell_count, 1) << "k=" << it.k;
    EXPECT_EQ(it.mu_k, params.mu_init) << "k=" << it.k;
  }
}

TEST(Bira, DefaultRelaxationUsesRestoredPrecision) {
  const SuiteEntry e = make_problem("p1");
  const RunReport rep = bira_run(*e.problem, suite_params(), options_for(e));
  for (const auto& it : rep.iterations)
    if (!std::isnan(it.mu_k)) EXPECT_EQ(it.y_next, it.y_R) << "k=" << it.k;
}

TEST(Bira, DefaultRelaxationSwitchesAtNAcce) {
  const PrecisionLevel y_k(0.2, 0.3), y_R(0.1, 0.0);
  for (int N_acce : {0, 1, 3}) {
    const RelaxationPolicy policy = default_relaxation(N_acce);
    for (int ell = 0; ell < N_acce; ++ell) EXPECT_EQ(policy(ell, y_k, y_R), y_k);
    EXPECT_EQ(policy(N_acce, y_k, y_R), y_R);
    EXPECT_EQ(policy(N_acce + 5, y_k, y_R), y_R);
  }
}

TEST(Bira, ConvergesWithRelaxedAttempts) {
  AlgorithmParams params = suite_params();
  params.N_acce = 2;
  const SuiteEntry e = make_problem("p1", params);
  const RunReport rep = bira_run(*e.problem, params, options_for(e));
  EXPECT_EQ(rep.status, RunStatus::Converged);
  for (const auto& it : rep.iterations)
    if (!std::isnan(it.mu_k) && it.ell_count <= 2) EXPECT_EQ(it.y_next, it.y_k) << "k=" << it.k;
}

TEST(Bira, RelaxationPolicyMustChooseKnownLevels) {
  const SuiteEntry e = make_problem("p1");
  BiraOptions o = options_for(e);
  o.relaxation = [](int, const PrecisionLevel&, const PrecisionLevel&) {
    return PrecisionLevel(0.123, 0.123);
  };
  EXPECT_THROW((void)bira_run(*e.problem, suite_params(), o), ContractError);
}

TEST(Bira, BudgetExceededWithTinyBudget) {
  const SuiteEntry e = make_problem("p2");
  BiraOptions o = options_for(e);
  o.budget = 1;
  const RunReport rep = bira_run(*e.problem, suite_params(), o);
  EXPECT_EQ(rep.status, RunStatus::BudgetExceeded);
  EXPECT_EQ(rep.iterations.size(), 1u);
}

TEST(Bira, PenaltyNeverIncreases) {
  for (const auto& id : problem_ids()) {
    const SuiteEntry e = make_problem(id);
    const RunReport rep = bira_run(*e.problem, suite_params(), options_for(e));
    double prev = suite_params().theta_0;
    for (const auto& it : rep.iterations) {
      EXPECT_EQ(it.theta_before, prev) << id << " k=" << it.k;
      EXPECT_LE(it.theta_after, it.theta_before) << id << " k=" << it.k;
      prev = it.theta_after;
    }
  }
}

TEST(Bira, LedgerTotalsMatchIterations) {
  const SuiteEntry e = make_problem("p2");
  const RunReport rep = bira_run(*e.problem, suite_params(), options_for(e));
  EvaluationLedger sum;
  for (const auto& it : rep.iterations) {
    sum.f_evals += it.iteration_ledger.f_evals;
    sum.gradf_evals += it.iteration_ledger.gradf_evals;
    sum.h_evals += it.iteration_ledger.h_evals;
    sum.gradh_evals += it.iteration_ledger.gradh_evals;
    EXPECT_EQ(it.cumulative_ledger, sum);
    EXPECT_EQ(it.restoration_ledger.f_evals + it.restoration_ledger.gradf_evals, 0u);
  }
  EXPECT_EQ(rep.total, sum);
}
