#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace irsolve {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point of the search space. Always checked for finiteness at API entry.
using DecisionPoint = Eigen::VectorXd;

// Error taxonomy. Each failure class maps to one exception type so the CLI can
// translate them to exit codes without string matching.

/// A caller broke an operation's precondition (bad argument range, etc.).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid algorithm or problem configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An oracle was queried outside its domain box.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A property that the convergence theory guarantees did not hold. Signals a
/// bug upstream or an oracle that violates its declared constants.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Restoration exceeded its hard iteration cap.
class AbnormalTermination : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or incomplete serialized trace.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require_finite(const Vector& v, const char* what);

/// Axis-aligned box lower <= x <= upper with finite bounds.
class BoxPolytope {
 public:
  BoxPolytope(Vector lower, Vector upper);

  [[nodiscard]] Eigen::Index dim() const { return lower_.size(); }
  [[nodiscard]] const Vector& lower() const { return lower_; }
  [[nodiscard]] const Vector& upper() const { return upper_; }

  /// Exact containment (no tolerance).
  [[nodiscard]] bool contains(const Vector& x) const;
  /// Containment with absolute slack `tol` per coordinate.
  [[nodiscard]] bool contains(const Vector& x, double tol) const;
  [[nodiscard]] double diameter() const { return (upper_ - lower_).norm(); }

 private:
  Vector lower_;
  Vector upper_;
};

/// The precision variable y, identified with its pair (g_f(y), g_h(y)).
struct PrecisionLevel {
  double gf = 0.0;
  double gh = 0.0;

  PrecisionLevel() = default;
  PrecisionLevel(double gf_, double gh_);

  [[nodiscard]] bool exact() const { return gf == 0.0 && gh == 0.0; }
  friend bool operator==(const PrecisionLevel&, const PrecisionLevel&) = default;
};

/// max{g_f(y), g_h(y)}
[[nodiscard]] double precision_g(const PrecisionLevel& y);

/// Euclidean distance between two precision levels viewed as points of R^2.
[[nodiscard]] double precision_distance(const PrecisionLevel& a, const PrecisionLevel& b);

/// Parameters shared by the outer loop and the restoration loop. Field names
/// follow the usual notation of the method so configs map one to one.
struct AlgorithmParams {
  double alpha_R = 0.1;
  double alpha = 0.1;
  double M = 10.0;
  double sigma_min = 0.1;
  double sigma_max = 1.0;
  double mu_min = 0.1;
  double mu_max = 100.0;
  double beta_c = 1.0;
  double beta_PDP = 10.0;
  double r = 0.5;
  double r_feas = 0.4;
  double eps_prec_bar = 0.0;
  int N_prec = 1;
  int N_acce = 0;
  double theta_0 = 0.9;
  double mu_init = 1.0;

  // Inexactness targets the inner QP solvers iterate to satisfy.
  double kappa_R = 10.0;
  double kappa_T = 10.0;
  double kappa = 10.0;
  double kappa_phi = 2.0;

  /// Throws ConfigError naming the first violated range constraint.
  void validate() const;
};

enum class Provenance { analytic, estimated };

[[nodiscard]] std::string to_string(Provenance p);
[[nodiscard]] Provenance provenance_from_string(const std::string& s);

/// Lipschitz constants and bounds of an inexact problem over its box.
struct ProblemConstants {
  double L_f = 0.0;
  double L_h = 0.0;
  double L_c = 0.0;
  double C_f = 0.0;
  double C_h = 0.0;
  double C_g = 1.0;
  Provenance provenance = Provenance::analytic;

  void validate() const;
};

/// Penalty parameter with its full history; the history may only decrease.
class PenaltyState {
 public:
  explicit PenaltyState(double theta0);

  [[nodiscard]] double theta() const { return history_.back(); }
  [[nodiscard]] const std::vector<double>& history() const { return history_; }
  void push(double theta);

 private:
  std::vector<double> history_;
};

/// theta * f + (1 - theta) * (||h|| + g)
[[nodiscard]] double merit_phi(double f_val, double h_norm, double g_val, double theta);

/// 0.5 * ||h||^2
[[nodiscard]] double constraint_ssq(const Vector& h_vec);

/// ||h|| + g
[[nodiscard]] double infeasibility(double h_norm, double g_val);

}  // namespace irsolve
