#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "irsolve/core.hpp"

namespace irsolve {

/// Exact count of oracle calls. Every evaluation increments exactly one field.
struct EvaluationLedger {
  std::uint64_t f_evals = 0;
  std::uint64_t gradf_evals = 0;
  std::uint64_t h_evals = 0;
  std::uint64_t gradh_evals = 0;

  [[nodiscard]] std::uint64_t total() const {
    return f_evals + gradf_evals + h_evals + gradh_evals;
  }
  friend EvaluationLedger operator-(const EvaluationLedger& a, const EvaluationLedger& b) {
    return {a.f_evals - b.f_evals, a.gradf_evals - b.gradf_evals, a.h_evals - b.h_evals,
            a.gradh_evals - b.gradh_evals};
  }
  friend bool operator==(const EvaluationLedger&, const EvaluationLedger&) = default;
};

/// Constants that belong to the oracle rather than to the trajectory: the
/// bounded-deterioration factor beta, and gamma, k_R of the restricted
/// deterioration bound.
struct OracleAssumptions {
  double beta = 0.0;
  double gamma = 0.5;
  int k_R = 0;
};

/// Candidate (x_R, y_R) produced by a problem-dependent restoration procedure.
struct RestoredPair {
  DecisionPoint x;
  PrecisionLevel y;
};

/// An objective f(x, y) and constraint map h(x, y) evaluated at a controllable
/// precision y. Public evaluators validate the domain and charge the ledger;
/// subclasses implement the *_impl hooks. Implementations must be safe for
/// concurrent const use; each run owns its ledger.
class InexactProblem {
 public:
  virtual ~InexactProblem() = default;

  [[nodiscard]] virtual std::string id() const = 0;
  [[nodiscard]] virtual const BoxPolytope& domain() const = 0;
  [[nodiscard]] virtual Eigen::Index num_constraints() const = 0;
  [[nodiscard]] virtual ProblemConstants constants() const = 0;
  [[nodiscard]] Eigen::Index dim() const { return domain().dim(); }

  double eval_f(const DecisionPoint& x, const PrecisionLevel& y, EvaluationLedger& ledger) const;
  Vector eval_grad_f(const DecisionPoint& x, const PrecisionLevel& y,
                     EvaluationLedger& ledger) const;
  Vector eval_h(const DecisionPoint& x, const PrecisionLevel& y, EvaluationLedger& ledger) const;
  /// n x m matrix whose columns are the gradients of the constraints.
  Matrix eval_grad_h(const DecisionPoint& x, const PrecisionLevel& y,
                     EvaluationLedger& ledger) const;

  /// Returns y' with g_f(y') <= gf_target and g_h(y') <= gh_target without
  /// evaluating f or h. An exact level is returned unchanged.
  [[nodiscard]] PrecisionLevel refine(const PrecisionLevel& y, double gf_target,
                                      double gh_target) const;

  [[nodiscard]] virtual std::optional<double> exact_f(const DecisionPoint&) const {
    return std::nullopt;
  }
  [[nodiscard]] virtual std::optional<Vector> exact_h(const DecisionPoint&) const {
    return std::nullopt;
  }
  [[nodiscard]] virtual std::optional<RestoredPair> pdp(const DecisionPoint&,
                                                        const PrecisionLevel&) const {
    return std::nullopt;
  }
  [[nodiscard]] virtual std::optional<OracleAssumptions> assumptions() const {
    return std::nullopt;
  }

 protected:
  virtual double f_impl(const DecisionPoint& x, const PrecisionLevel& y) const = 0;
  virtual Vector grad_f_impl(const DecisionPoint& x, const PrecisionLevel& y) const = 0;
  virtual Vector h_impl(const DecisionPoint& x, const PrecisionLevel& y) const = 0;
  virtual Matrix grad_h_impl(const DecisionPoint& x, const PrecisionLevel& y) const = 0;
  virtual PrecisionLevel refine_impl(const PrecisionLevel& y, double gf_target,
                                     double gh_target) const;

 private:
  void check_domain(const DecisionPoint& x, const char* what) const;
};

/// eta(x) = sin(w1.x + p1) * cos(w2.x + p2). Values lie in [-1, 1]; the
/// gradient norm is at most |w1| + |w2| and the Hessian norm at most its square.
struct SmoothNoise {
  Vector w1;
  double p1 = 0.0;
  Vector w2;
  double p2 = 0.0;

  [[nodiscard]] double value(const Vector& x) const;
  [[nodiscard]] Vector gradient(const Vector& x) const;
  [[nodiscard]] double gradient_bound() const { return w1.norm() + w2.norm(); }
  [[nodiscard]] double hessian_bound() const {
    const double g = gradient_bound();
    return g * g;
  }
};

/// Closed-form F and H perturbed by deterministic smooth noise:
///   f(x, y) = F(x) + noise_scale_f * g_f(y) * eta_f(x)
///   h(x, y) = H(x) + noise_scale_h * g_h(y) * eta_h(x)
/// and likewise for the gradients.
class SyntheticProblem final : public InexactProblem {
 public:
  struct Definition {
    std::string id;
    BoxPolytope box;
    std::function<double(const Vector&)> F;
    std::function<Vector(const Vector&)> grad_F;
    std::function<Vector(const Vector&)> H;
    /// n x m, columns are gradients of H_i
    std::function<Matrix(const Vector&)> grad_H;
    Eigen::Index m = 0;
    SmoothNoise noise_f;
    std::vector<SmoothNoise> noise_h;  // one per constraint
    double noise_scale_f = 0.0;
    double noise_scale_h = 0.0;
    ProblemConstants constants;
    OracleAssumptions assumptions;
    /// Refinement targets below this value are served by the exact level.
    /// Zero disables snapping.
    double exact_below = 0.0;
    bool has_pdp = false;
  };

  explicit SyntheticProblem(Definition def);

  [[nodiscard]] std::string id() const override { return def_.id; }
  [[nodiscard]] const BoxPolytope& domain() const override { return def_.box; }
  [[nodiscard]] Eigen::Index num_constraints() const override { return def_.m; }
  [[nodiscard]] ProblemConstants constants() const override { return def_.constants; }
  [[nodiscard]] std::optional<double> exact_f(const DecisionPoint& x) const override;
  [[nodiscard]] std::optional<Vector> exact_h(const DecisionPoint& x) const override;
  [[nodiscard]] std::optional<RestoredPair> pdp(const DecisionPoint& x,
                                                const PrecisionLevel& y) const override;
  [[nodiscard]] std::optional<OracleAssumptions> assumptions() const override {
    return def_.assumptions;
  }

  [[nodiscard]] double noise_scale_f() const { return def_.noise_scale_f; }
  [[nodiscard]] double noise_scale_h() const { return def_.noise_scale_h; }
  [[nodiscard]] const SmoothNoise& noise_f() const { return def_.noise_f; }
  [[nodiscard]] const std::vector<SmoothNoise>& noise_h() const { return def_.noise_h; }
  [[nodiscard]] double exact_below() const { return def_.exact_below; }
  [[nodiscard]] const Definition& definition() const { return def_; }

 protected:
  double f_impl(const DecisionPoint& x, const PrecisionLevel& y) const override;
  Vector grad_f_impl(const DecisionPoint& x, const PrecisionLevel& y) const override;
  Vector h_impl(const DecisionPoint& x, const PrecisionLevel& y) const override;
  Matrix grad_h_impl(const DecisionPoint& x, const PrecisionLevel& y) const override;
  PrecisionLevel refine_impl(const PrecisionLevel& y, double gf_target,
                             double gh_target) const override;

 private:
  Definition def_;
};

}  // namespace irsolve
