#include "irsolve/core.hpp"

#include <cmath>
#include <sstream>

namespace irsolve {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw ContractError(std::string(what) + " has non-finite entries");
}

BoxPolytope::BoxPolytope(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size())
    throw ConfigError("box bounds have different lengths");
  if (lower_.size() == 0) throw ConfigError("box must have positive dimension");
  require_finite(lower_, "box lower bound");
  require_finite(upper_, "box upper bound");
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (lower_[i] > upper_[i]) {
      std::ostringstream os;
      os << "box lower[" << i << "] > upper[" << i << "]";
      throw ConfigError(os.str());
    }
  }
}

bool BoxPolytope::contains(const Vector& x) const { return contains(x, 0.0); }

bool BoxPolytope::contains(const Vector& x, double tol) const {
  if (x.size() != lower_.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower_[i] - tol && x[i] <= upper_[i] + tol)) return false;
  }
  return true;
}

PrecisionLevel::PrecisionLevel(double gf_, double gh_) : gf(gf_), gh(gh_) {
  if (!(gf >= 0.0) || !(gh >= 0.0) || !std::isfinite(gf) || !std::isfinite(gh))
    throw ContractError("precision measures must be finite and nonnegative");
}

double precision_g(const PrecisionLevel& y) { return std::max(y.gf, y.gh); }

double precision_distance(const PrecisionLevel& a, const PrecisionLevel& b) {
  return std::hypot(a.gf - b.gf, a.gh - b.gh);
}

void AlgorithmParams::validate() const {
  require(alpha_R > 0, "alpha_R must be > 0");
  require(alpha > 0, "alpha must be > 0");
  require(M >= 1, "M must be >= 1");
  require(sigma_min > 0, "sigma_min must be > 0");
  require(sigma_max >= sigma_min, "sigma_max must be >= sigma_min");
  require(mu_min > 0, "mu_min must be > 0");
  require(mu_max >= mu_min, "mu_max must be >= mu_min");
  require(beta_c > 0, "beta_c must be > 0");
  require(beta_PDP > 0, "beta_PDP must be > 0");
  require(r > 0 && r < 1, "r must lie in (0,1)");
  require(r_feas > 0 && r_feas < r, "r_feas must lie in (0,r)");
  require(eps_prec_bar >= 0, "eps_prec_bar must be >= 0");
  require(N_prec >= 0, "N_prec must be >= 0");
  require(N_acce >= 0, "N_acce must be >= 0");
  require(theta_0 > 0 && theta_0 < 1, "theta_0 must lie in (0,1)");
  require(mu_init >= mu_min && mu_init <= mu_max, "mu_init must lie in [mu_min, mu_max]");
  require(kappa_R > 0 && kappa_T > 0 && kappa > 0 && kappa_phi > 0,
          "kappa targets must be > 0");
  // B = 0 must satisfy ||(B + sigma_min I)^{-1}|| <= M.
  require(M * sigma_min >= 1, "M * sigma_min must be >= 1");
}

std::string to_string(Provenance p) {
  return p == Provenance::analytic ? "analytic" : "estimated";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "analytic") return Provenance::analytic;
  if (s == "estimated") return Provenance::estimated;
  throw SchemaError("unknown provenance '" + s + "'");
}

void ProblemConstants::validate() const {
  require(L_f >= 0 && L_h >= 0 && L_c >= 0, "Lipschitz constants must be >= 0");
  require(C_f >= 0 && C_h >= 0, "bounds must be >= 0");
  require(C_g >= 1, "C_g must be >= 1");
}

PenaltyState::PenaltyState(double theta0) {
  if (!(theta0 > 0 && theta0 < 1)) throw ContractError("theta_0 must lie in (0,1)");
  history_.push_back(theta0);
}

void PenaltyState::push(double theta) {
  if (!(theta > 0) || theta > history_.back())
    throw InvariantViolation("penalty parameter must stay positive and nonincreasing");
  history_.push_back(theta);
}

double merit_phi(double f_val, double h_norm, double g_val, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ContractError("theta must lie in [0,1]");
  if (!(h_norm >= 0.0) || !(g_val >= 0.0))
    throw ContractError("merit needs nonnegative infeasibility terms");
  return theta * f_val + (1.0 - theta) * (h_norm + g_val);
}

double constraint_ssq(const Vector& h_vec) { return 0.5 * h_vec.squaredNorm(); }

double infeasibility(double h_norm, double g_val) {
  if (!(h_norm >= 0.0) || !(g_val >= 0.0))
    throw ContractError("infeasibility terms must be nonnegative");
  return h_norm + g_val;
}

}  // namespace irsolve
