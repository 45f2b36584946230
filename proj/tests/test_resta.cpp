#include <gtest/gtest.h>

#include "irsolve/resta.hpp"
#include "irsolve/suite.hpp"
#include "support.hpp"

using namespace irsolve;
using irsolve::testing::vec;

namespace {

// P1 with noise removed.
std::shared_ptr<const SyntheticProblem> exact_p1(bool pdp = false) {
  SyntheticProblem::Definition def = make_problem("p1").problem->definition();
  def.noise_scale_f = def.noise_scale_h = 0.0;
  def.has_pdp = pdp;
  return std::make_shared<const SyntheticProblem>(def);
}

}  // namespace

TEST(Sigma, Schedule) {
  EXPECT_EQ(sigma_schedule(1.0), 2.0);
  EXPECT_EQ(sigma_schedule(0.5), 1.0);
  for (double s : {0.1, 3.0, 1e5}) {
    EXPECT_GE(sigma_schedule(s) / s, 2.0);
    EXPECT_LE(sigma_schedule(s) / s, 10.0);
  }
}

TEST(Z0, IsCurrentPoint) {
  const Vector x = vec({1, 2, 3});
  EXPECT_EQ(choose_z0(x), x);
}

TEST(Resta, TrivialReturnWhenFeasibleAndExact) {
  const SuiteEntry e = make_problem("p4");
  EvaluationLedger led;
  const RestorationOutcome out = resta(e.x0, e.y0, *e.problem, suite_params(), led);
  EXPECT_EQ(out.status, RestorationStatus::TrivialReturn);
  EXPECT_EQ(out.x_R, e.x0);
  EXPECT_TRUE(out.y_R == e.y0);
  EXPECT_EQ(led.f_evals + led.gradf_evals, 0u);
}

TEST(Resta, LinearConstraintRestoredInOneStep) {
  const auto p = exact_p1();
  const SuiteEntry e = make_problem("p1");
  EvaluationLedger led;
  const RestorationOutcome out = resta(e.x0, PrecisionLevel(0.01, 0.01), *p, suite_params(), led);
  EXPECT_EQ(out.status, RestorationStatus::Restored);
  EXPECT_GE(out.accepted_steps, 1);
  EXPECT_LE(out.h_xR_yR, suite_params().r * out.h_xk_yR);
  EXPECT_EQ(led.f_evals + led.gradf_evals, 0u);
  EXPECT_EQ(out.ledger_delta, led);
}

TEST(Resta, InfeasibleProblemEndsInPossibleInfeasibility) {
  const SuiteEntry e = make_problem("p3");
  EvaluationLedger led;
  const RestorationOutcome out = resta(e.x0, e.y0, *e.problem, suite_params(), led);
  EXPECT_EQ(out.status, RestorationStatus::PossibleInfeasibility);
  EXPECT_LE(out.y_R.gh, suite_params().eps_prec_bar);
  // Stopped at an approximate stationary point of c, short of feasibility.
  EXPECT_LE(out.final_pg_residual, suite_params().r_feas * out.h_xk_yR);
  EXPECT_LT(std::abs(out.x_R[0]), std::abs(e.x0[0]));
  EXPECT_GE(out.h_xR_yR, 1.0);
}

TEST(Resta, SigmaNeverExceedsCap) {
  const AlgorithmParams params = suite_params();
  for (const std::string id : {"p1", "p2", "p3"}) {
    const SuiteEntry e = make_problem(id);
    const TheoreticalConstants tc = constants_for(*e.problem, params);
    EvaluationLedger led;
    const RestorationOutcome out = resta(e.x0, e.y0, *e.problem, params, led);
    for (double s : out.sigma_history) EXPECT_LE(s, tc.sigma_cap);
    EXPECT_TRUE(out.c_monotone);
  }
}

TEST(Resta, HardCapRaisesAbnormalTermination) {
  const SuiteEntry e = make_problem("p2");
  EvaluationLedger led;
  RestaOptions opts;
  opts.hard_cap = 1;
  Vector x = e.x0;
  x << 2.0, 2.0;
  EXPECT_THROW((void)resta(x, PrecisionLevel(0.5, 0.5), *e.problem, suite_params(), led, opts),
               AbnormalTermination);
}

TEST(Pdp, CandidateChecks) {
  const auto p = exact_p1();
  const SuiteEntry e = make_problem("p1");
  const AlgorithmParams params = suite_params();
  EvaluationLedger led;
  const Vector xs = *e.minimizer;
  // x_k = x* + t 1 is infeasible by 5t; its projection is x*.
  const Vector xk = xs + Vector::Constant(5, 0.1);
  const PdpCheck good = check_pdp({xs, PrecisionLevel(0, 0)}, xk, PrecisionLevel(0.2, 0.2), *p, params, led);
  EXPECT_TRUE(good.accepted);
  EXPECT_EQ(led.h_evals, 2u);

  const PdpCheck imprecise =
      check_pdp({xs, PrecisionLevel(0.15, 0)}, xk, PrecisionLevel(0.2, 0.2), *p, params, led);
  EXPECT_FALSE(imprecise.accepted);

  AlgorithmParams tight = params;
  tight.beta_PDP = 1e-3;
  const PdpCheck far = check_pdp({xs, PrecisionLevel(0, 0)}, xk, PrecisionLevel(0.2, 0.2), *p, tight, led);
  EXPECT_FALSE(far.accepted);
}

TEST(Pdp, AcceptedCandidateSkipsInnerLoop) {
  const auto p = exact_p1(true);
  const SuiteEntry e = make_problem("p1");
  EvaluationLedger led;
  const RestorationOutcome out = resta(e.x0, PrecisionLevel(0.01, 0.01), *p, suite_params(), led);
  EXPECT_EQ(out.status, RestorationStatus::PDPRestored);
  EXPECT_EQ(out.inner_iterations, 0);
  EXPECT_LE(out.h_xR_yR, 1e-12);
}
