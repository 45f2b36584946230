#include "irsolve/oracle.hpp"

#include <cmath>
#include <sstream>

namespace irsolve {

void InexactProblem::check_domain(const DecisionPoint& x, const char* what) const {
  if (x.size() != dim()) {
    std::ostringstream os;
    os << what << ": point has dimension " << x.size() << ", expected " << dim();
    throw DomainError(os.str());
  }
  if (!x.allFinite()) throw DomainError(std::string(what) + ": non-finite point");
  if (!domain().contains(x)) throw DomainError(std::string(what) + ": point outside the box");
}

double InexactProblem::eval_f(const DecisionPoint& x, const PrecisionLevel& y,
                              EvaluationLedger& ledger) const {
  check_domain(x, "eval_f");
  ++ledger.f_evals;
  return f_impl(x, y);
}

Vector InexactProblem::eval_grad_f(const DecisionPoint& x, const PrecisionLevel& y,
                                   EvaluationLedger& ledger) const {
  check_domain(x, "eval_grad_f");
  ++ledger.gradf_evals;
  return grad_f_impl(x, y);
}

Vector InexactProblem::eval_h(const DecisionPoint& x, const PrecisionLevel& y,
                              EvaluationLedger& ledger) const {
  check_domain(x, "eval_h");
  ++ledger.h_evals;
  return h_impl(x, y);
}

Matrix InexactProblem::eval_grad_h(const DecisionPoint& x, const PrecisionLevel& y,
                                   EvaluationLedger& ledger) const {
  check_domain(x, "eval_grad_h");
  ++ledger.gradh_evals;
  return grad_h_impl(x, y);
}

PrecisionLevel InexactProblem::refine(const PrecisionLevel& y, double gf_target,
                                      double gh_target) const {
  if (!(gf_target >= 0.0) || !(gh_target >= 0.0))
    throw ContractError("refine targets must be nonnegative");
  if (y.exact()) return y;
  const PrecisionLevel out = refine_impl(y, gf_target, gh_target);
  if (out.gf > gf_target || out.gh > gh_target)
    throw InvariantViolation("refine returned a level above its targets");
  return out;
}

PrecisionLevel InexactProblem::refine_impl(const PrecisionLevel&, double gf_target,
                                           double gh_target) const {
  return {gf_target, gh_target};
}

double SmoothNoise::value(const Vector& x) const {
  return std::sin(w1.dot(x) + p1) * std::cos(w2.dot(x) + p2);
}

Vector SmoothNoise::gradient(const Vector& x) const {
  const double a = w1.dot(x) + p1;
  const double b = w2.dot(x) + p2;
  return std::cos(a) * std::cos(b) * w1 - std::sin(a) * std::sin(b) * w2;
}

SyntheticProblem::SyntheticProblem(Definition def) : def_(std::move(def)) {
  const Eigen::Index n = def_.box.dim();
  if (!def_.F || !def_.grad_F || !def_.H || !def_.grad_H)
    throw ConfigError("synthetic problem '" + def_.id + "' is missing a closed form");
  if (def_.noise_f.w1.size() != n || def_.noise_f.w2.size() != n)
    throw ConfigError("objective noise frequencies have the wrong dimension");
  if (static_cast<Eigen::Index>(def_.noise_h.size()) != def_.m)
    throw ConfigError("need one constraint noise field per constraint");
  for (const auto& eta : def_.noise_h) {
    if (eta.w1.size() != n || eta.w2.size() != n)
      throw ConfigError("constraint noise frequencies have the wrong dimension");
  }
  if (!(def_.noise_scale_f >= 0) || !(def_.noise_scale_h >= 0) || !(def_.exact_below >= 0))
    throw ConfigError("noise scales and exact_below must be nonnegative");
  def_.constants.validate();
}

double SyntheticProblem::f_impl(const DecisionPoint& x, const PrecisionLevel& y) const {
  double v = def_.F(x);
  if (y.gf != 0.0) v += def_.noise_scale_f * y.gf * def_.noise_f.value(x);
  return v;
}

Vector SyntheticProblem::grad_f_impl(const DecisionPoint& x, const PrecisionLevel& y) const {
  Vector g = def_.grad_F(x);
  if (y.gf != 0.0) g += def_.noise_scale_f * y.gf * def_.noise_f.gradient(x);
  return g;
}

Vector SyntheticProblem::h_impl(const DecisionPoint& x, const PrecisionLevel& y) const {
  Vector v = def_.H(x);
  if (y.gh != 0.0) {
    for (Eigen::Index i = 0; i < def_.m; ++i)
      v[i] += def_.noise_scale_h * y.gh * def_.noise_h[i].value(x);
  }
  return v;
}

Matrix SyntheticProblem::grad_h_impl(const DecisionPoint& x, const PrecisionLevel& y) const {
  Matrix J = def_.grad_H(x);
  if (y.gh != 0.0) {
    for (Eigen::Index i = 0; i < def_.m; ++i)
      J.col(i) += def_.noise_scale_h * y.gh * def_.noise_h[i].gradient(x);
  }
  return J;
}

PrecisionLevel SyntheticProblem::refine_impl(const PrecisionLevel&, double gf_target,
                                             double gh_target) const {
  const auto snap = [this](double t) { return t < def_.exact_below ? 0.0 : t; };
  return {snap(gf_target), snap(gh_target)};
}

std::optional<double> SyntheticProblem::exact_f(const DecisionPoint& x) const {
  return def_.F(x);
}

std::optional<Vector> SyntheticProblem::exact_h(const DecisionPoint& x) const {
  return def_.H(x);
}

std::optional<RestoredPair> SyntheticProblem::pdp(const DecisionPoint& x,
                                                  const PrecisionLevel& y) const {
  if (!def_.has_pdp) return std::nullopt;
  // One Newton step on the exact constraints, clamped to the box. Exact for
  // linear constraints whose correction stays inside the box.
  const Matrix J = def_.grad_H(x);
  const Vector h = def_.H(x);
  const Vector corr = J.transpose().completeOrthogonalDecomposition().solve(h);
  Vector xr = x - corr;
  xr = xr.cwiseMax(def_.box.lower()).cwiseMin(def_.box.upper());
  return RestoredPair{xr, refine(y, 0.5 * y.gf, 0.5 * y.gh)};
}

}  // namespace irsolve
